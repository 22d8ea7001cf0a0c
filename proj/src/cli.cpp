#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include <ssflow/cli.hpp>
#include <ssflow/csv.hpp>
#include <ssflow/equivalence.hpp>
#include <ssflow/errors.hpp>
#include <ssflow/phase_plane.hpp>
#include <ssflow/solutions.hpp>
#include <ssflow/verification.hpp>

namespace ssflow
{

namespace
{

using nlohmann::json;

// Flags shared by every subcommand that needs one equation.
struct ParamFlags {
    std::string eq = "pme";
    std::optional<double> m;
    std::optional<double> p;
    std::optional<double> n;
    double beta = 0;
    std::string type = "I";

    void attach(CLI::App *cmd)
    {
        cmd->add_option("--eq", eq, "pme or ple")->check(CLI::IsMember({"pme", "ple"}));
        cmd->add_option("--m", m, "PME exponent");
        cmd->add_option("--p", p, "PLE exponent");
        cmd->add_option("--n", n, "dimension");
        cmd->add_option("--beta", beta, "similarity exponent");
        cmd->add_option("--type", type, "similarity type")->check(CLI::IsMember({"I", "II", "III"}));
    }

    SimilarityType similarity() const
    {
        return type == "I" ? SimilarityType::TypeI : type == "II" ? SimilarityType::TypeII : SimilarityType::TypeIII;
    }

    EquationParams build() const
    {
        if (!n) {
            throw Error(ErrorCode::InvalidParameter, "--n is required");
        }
        if (eq == "pme") {
            if (!m) {
                throw Error(ErrorCode::InvalidParameter, "--m is required for --eq pme");
            }
            return PMEParams(*m, *n, beta, similarity());
        }
        if (!p) {
            throw Error(ErrorCode::InvalidParameter, "--p is required for --eq ple");
        }
        return PLEParams(*p, *n, beta, similarity());
    }
};

const char *type_name(SimilarityType type)
{
    switch (type) {
        case SimilarityType::TypeI:
            return "I";
        case SimilarityType::TypeII:
            return "II";
        case SimilarityType::TypeIII:
            return "III";
    }
    return "?";
}

json params_json(const EquationParams &params)
{
    json j;
    if (const auto *pme = std::get_if<PMEParams>(&params)) {
        j = {{"equation", "pme"}, {"m", pme->m()}, {"n", pme->n()}, {"beta", pme->beta()}, {"type", type_name(pme->type())}};
    } else {
        const auto &ple = std::get<PLEParams>(params);
        j = {{"equation", "ple"}, {"p", ple.p()}, {"n", ple.n()}, {"beta", ple.beta()}, {"type", type_name(ple.type())}};
    }
    j["alpha"] = alpha_from(params);
    return j;
}

json coefficients_json(const UnifiedCoefficients &c)
{
    return {{"c1", c.c1},
            {"c2", c.c2},
            {"c3", c.c3},
            {"sqrt_abs_b", c.sqrt_abs_b},
            {"const_term", c.const_term},
            {"psi_coeff", c.psi_coeff},
            {"critical", c.critical}};
}

json check_json(const std::string &name, bool pass, double dev, double tol)
{
    return {{"name", name}, {"pass", pass}, {"max_dev", dev}, {"tol", tol}};
}

json error_json(const std::string &reason, std::string_view code)
{
    return {{"status", "error"}, {"reason", reason}, {"code", std::string(code)}};
}

int report_error(std::ostream &err, const Error &e)
{
    json j = error_json(e.what(), to_string(e.code()));
    if (e.value()) {
        j["value"] = *e.value();
    }
    err << j.dump(2) << '\n';
    return exit_usage;
}

// Writes to --out when given, else to the fallback stream.
void with_output(const std::string &path, std::ostream &fallback, const std::function<void(std::ostream &)> &write)
{
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::Io, "cannot open " + path);
    }
    write(file);
    if (!file) {
        throw Error(ErrorCode::Io, "write failed for " + path);
    }
}

double default_tol()
{
    return verification_tol_from_env();
}

int cmd_map(const ParamFlags &flags, const std::string &branch_flag, double tol, std::ostream &out, std::ostream &err)
{
    const EquationParams source = flags.build();
    std::vector<Branch> branches;
    if (branch_flag != "2") {
        branches.push_back(Branch::Branch1);
    }
    if (branch_flag != "1") {
        branches.push_back(Branch::Branch2);
    }

    json targets = json::array();
    json checks = json::array();
    bool all_pass = true;
    std::optional<Error> last_error;
    std::size_t mapped = 0;
    for (Branch branch : branches) {
        const std::string label = branch == Branch::Branch1 ? "branch1" : "branch2";
        try {
            EquivalenceReport report;
            json target;
            if (const auto *src = std::get_if<PMEParams>(&source)) {
                const PLEParams ple = pme_to_ple(*src, branch, default_critical_tol);
                report = verify_equivalence(*src, ple, tol);
                target = params_json(ple);
            } else {
                const auto &ple = std::get<PLEParams>(source);
                const PMEParams pme = ple_to_pme(ple, branch, default_critical_tol);
                report = verify_equivalence(pme, ple, tol);
                target = params_json(pme);
            }
            target["branch"] = label;
            target["orientation"] = report.orientation;
            targets.push_back(target);
            checks.push_back(check_json(label + "/coefficients", report.c_match, report.c_max_dev, tol));
            checks.push_back(check_json(label + "/beta-identity", report.beta_identity, report.beta_identity_dev, tol));
            checks.push_back(check_json(label + "/b-ratio", report.b_ratio, report.b_ratio_dev, tol));
            checks.push_back(check_json(label + "/sign", report.sign_match, report.sign_match ? 0.0 : 1.0, 0.0));
            all_pass = all_pass && report.all_pass();
            ++mapped;
        } catch (const Error &e) {
            last_error = e;
            json rejected = {{"branch", label}, {"error", e.what()}, {"code", std::string(to_string(e.code()))}};
            if (e.value()) {
                rejected["value"] = *e.value();
            }
            targets.push_back(rejected);
        }
    }
    if (mapped == 0) {
        return report_error(err, *last_error);
    }

    json j = {{"status", all_pass ? "ok" : "fail"},
              {"params", {{"source", params_json(source)}, {"targets", targets}}},
              {"checks", checks}};
    out << j.dump(2) << '\n';
    return all_pass ? exit_ok : exit_verification;
}

int cmd_coeffs(const ParamFlags &flags, std::ostream &out)
{
    const EquationParams params = flags.build();
    const auto c = unified_coefficients(params);
    const Regime regime = std::visit([](const auto &p) { return classify_regime(p); }, params);
    json j = {{"status", "ok"},
              {"params", params_json(params)},
              {"coefficients", coefficients_json(c)},
              {"regime", to_string(regime)},
              {"checks", json::array()}};
    out << j.dump(2) << '\n';
    return exit_ok;
}

struct IntegrateFlags {
    bool native = false;
    std::string preset;
    std::optional<double> psi0, phi0, x0, y0;
    double r_start = 0;
    double r_end = 1;
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.05;
    std::string out;

    IntegrationSettings settings() const
    {
        IntegrationSettings s;
        s.rel_tol = rtol;
        s.abs_tol = atol;
        s.max_step = max_step;
        return s;
    }
};

void warn_status(const Trajectory &traj, std::ostream &err)
{
    if (traj.status != IntegrationStatus::Completed) {
        err << "integration stopped early: " << to_string(traj.status);
        if (!traj.message.empty()) {
            err << " (" << traj.message << ')';
        }
        err << '\n';
    }
}

int cmd_integrate(const ParamFlags &flags, const IntegrateFlags &opts, std::ostream &out, std::ostream &err)
{
    Trajectory traj;
    if (!opts.preset.empty()) {
        const auto named = named_trajectory(opts.preset);
        if (!named) {
            throw Error(ErrorCode::InvalidParameter, "unknown preset '" + opts.preset + "'");
        }
        traj = integrate_named(*named);
    } else {
        const EquationParams params = flags.build();
        if (!opts.native) {
            if (!opts.psi0 || !opts.phi0) {
                throw Error(ErrorCode::InvalidParameter, "--psi0 and --phi0 are required");
            }
            traj = integrate_unified(unified_coefficients(params), {*opts.psi0, *opts.phi0}, opts.r_start, opts.r_end,
                                     opts.settings());
        } else {
            if (!opts.x0 || !opts.y0) {
                throw Error(ErrorCode::InvalidParameter, "--x0 and --y0 are required with --native");
            }
            // Native runs use r = log(eta) and are mapped to the unified plane on output.
            if (const auto *pme = std::get_if<PMEParams>(&params)) {
                traj = map_to_unified(
                    integrate_pme_native(*pme, {*opts.x0, *opts.y0}, opts.r_start, opts.r_end, opts.settings()), *pme);
            } else {
                const auto &ple = std::get<PLEParams>(params);
                traj = map_to_unified(
                    integrate_ple_native_xy(ple, *opts.x0, *opts.y0, opts.r_start, opts.r_end, opts.settings()), ple);
            }
        }
    }
    warn_status(traj, err);
    with_output(opts.out, out, [&](std::ostream &os) { write_trajectory_csv(os, traj); });
    return exit_ok;
}

struct ProfileFlags {
    std::optional<double> eta0, f0, fp0;
    double r_end = 1;
    double rtol = 1e-10;
    double atol = 1e-12;
    std::string out;
};

int cmd_profile(const ParamFlags &flags, const ProfileFlags &opts, std::ostream &out, std::ostream &err)
{
    if (!opts.eta0 || !opts.f0 || !opts.fp0) {
        throw Error(ErrorCode::InvalidParameter, "--eta0, --f0 and --fp0 are required");
    }
    const EquationParams params = flags.build();
    const ProfileSample anchor{*opts.eta0, *opts.f0, *opts.fp0};
    IntegrationSettings settings;
    settings.rel_tol = opts.rtol;
    settings.abs_tol = opts.atol;

    const ReconstructedProfile profile = std::visit(
        [&](const auto &p) {
            const PhaseState start = profile_to_state(anchor, p);
            const auto traj = integrate_unified(unified_coefficients(p), start, 0, opts.r_end, settings);
            warn_status(traj, err);
            return reconstruct_profile(traj, p, anchor);
        },
        params);
    if (profile.truncated) {
        err << "profile truncated: " << profile.diagnostic << '\n';
    }
    with_output(opts.out, out, [&](std::ostream &os) { write_profile_csv(os, profile.samples); });
    return exit_ok;
}

struct ExplicitFlags {
    std::string kind;
    std::optional<double> C, K, k1, k2, c;
    std::size_t samples = 101;
    std::optional<double> eta_max;
    std::string out;
    std::string footer;
};

double need(const std::optional<double> &v, const char *flag)
{
    if (!v) {
        throw Error(ErrorCode::InvalidParameter, std::string(flag) + " is required for this kind");
    }
    return *v;
}

ClosedFormProfile make_profile(const ParamFlags &flags, const ExplicitFlags &opts)
{
    const double n = need(flags.n, "--n");
    if (opts.kind == "barenblatt-pme") {
        return barenblatt_pme(need(flags.m, "--m"), n, need(opts.C, "--C"));
    }
    if (opts.kind == "barenblatt-ple") {
        return barenblatt_ple(need(flags.p, "--p"), n, need(opts.C, "--C"));
    }
    if (opts.kind == "dipole-pme") {
        return dipole_pme(need(flags.m, "--m"), n, need(opts.K, "--K"));
    }
    if (opts.kind == "dipole-derivative-ple") {
        return dipole_derivative_ple(need(flags.p, "--p"), n, need(opts.c, "--c"));
    }
    if (opts.kind == "loewner-nirenberg-pme") {
        return loewner_nirenberg_pme(n, need(opts.k1, "--k1"));
    }
    if (opts.kind == "yamabe-ple") {
        return yamabe_ple(n, need(opts.k2, "--k2"));
    }
    throw Error(ErrorCode::InvalidParameter, "unknown profile kind '" + opts.kind + "'");
}

int cmd_explicit(const ParamFlags &flags, const ExplicitFlags &opts, std::ostream &out, std::ostream &err)
{
    const ClosedFormProfile profile = make_profile(flags, opts);
    const double eta_max = opts.eta_max ? *opts.eta_max : profile.support_end().value_or(10.0);
    if (!(eta_max > 0) || opts.samples < 2) {
        throw Error(ErrorCode::InvalidParameter, "need --eta-max > 0 and --samples >= 2");
    }

    std::vector<ProfileSample> samples;
    for (std::size_t i = 0; i < opts.samples; ++i) {
        const double eta = eta_max * static_cast<double>(i) / static_cast<double>(opts.samples - 1);
        if (const auto v = profile.evaluate(eta)) {
            if (std::isfinite(v->f) && std::isfinite(v->fprime)) {
                samples.push_back({eta, v->f, v->fprime});
            }
        } else if (profile.support_end() && eta >= *profile.support_end()) {
            samples.push_back({eta, 0.0, 0.0});
        }
    }
    const double max_residual = max_abs_residual(profile);

    json constants = json::object();
    for (const auto &[name, value] : profile.constants()) {
        constants[name] = value;
    }
    const bool pass = max_residual < residual_tol;
    json footer = {{"status", pass ? "ok" : "fail"},
                   {"kind", to_string(profile.kind())},
                   {"params", params_json(profile.params())},
                   {"constants", constants},
                   {"max_residual", max_residual},
                   {"checks", json::array({check_json("residual", pass, max_residual, residual_tol)})}};
    if (profile.support_end()) {
        footer["support_end"] = *profile.support_end();
    }

    with_output(opts.out, out, [&](std::ostream &os) { write_profile_csv(os, samples); });
    std::string footer_path = opts.footer;
    if (footer_path.empty() && !opts.out.empty()) {
        footer_path = opts.out + ".json";
    }
    with_output(footer_path, err, [&](std::ostream &os) { os << footer.dump(2) << '\n'; });
    return exit_ok;
}

int cmd_verify(const std::string &grid_name, double tol, std::ostream &out)
{
    if (grid_name != "default") {
        throw Error(ErrorCode::InvalidParameter, "unknown grid '" + grid_name + "'");
    }
    const VerificationGrid grid = default_grid();
    const VerificationSummary summary = run_verification(grid, tol);

    json checks = json::array();
    for (const auto &c : summary.checks) {
        json entry = check_json(c.name, c.pass, c.max_dev, c.tol);
        entry["evaluated"] = c.evaluated;
        checks.push_back(entry);
    }
    const bool pass = summary.all_pass();
    json j = {{"status", pass ? "ok" : "fail"},
              {"params", {{"grid", grid_name}, {"m", grid.m_values}, {"n", grid.n_values}, {"tol", tol}}},
              {"checks", checks},
              {"skipped", summary.skipped},
              {"reversed_cells", summary.reversed_cells}};
    out << j.dump(2) << '\n';
    return pass ? exit_ok : exit_verification;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Self-similar PME/PLE phase-plane toolkit", "ssflow"};
    app.require_subcommand(1, 1);

    ParamFlags flags;
    double tol = default_tol();

    auto *map = app.add_subcommand("map", "map parameters between the equations");
    flags.attach(map);
    std::string branch = "both";
    map->add_option("--branch", branch, "1, 2 or both")->check(CLI::IsMember({"1", "2", "both"}));
    map->add_option("--tol", tol, "identity tolerance");

    auto *coeffs = app.add_subcommand("coeffs", "unified-system coefficients");
    ParamFlags coeff_flags;
    coeff_flags.attach(coeffs);

    auto *integrate = app.add_subcommand("integrate", "integrate a trajectory, CSV r1,psi,phi");
    ParamFlags integrate_params;
    integrate_params.attach(integrate);
    IntegrateFlags iopts;
    bool unified_flag = false;
    integrate->add_flag("--unified", unified_flag, "integrate the unified system (default)");
    integrate->add_flag("--native", iopts.native, "integrate the native system and map the result");
    integrate->add_option("--preset", iopts.preset, "named trajectory");
    integrate->add_option("--psi0", iopts.psi0);
    integrate->add_option("--phi0", iopts.phi0);
    integrate->add_option("--x0", iopts.x0);
    integrate->add_option("--y0", iopts.y0);
    integrate->add_option("--r-start", iopts.r_start);
    integrate->add_option("--r-end", iopts.r_end);
    integrate->add_option("--rtol", iopts.rtol);
    integrate->add_option("--atol", iopts.atol);
    integrate->add_option("--max-step", iopts.max_step);
    integrate->add_option("--out", iopts.out);

    auto *profile = app.add_subcommand("profile", "reconstruct a profile from an anchor value, CSV eta,f,fprime");
    ParamFlags profile_params;
    profile_params.attach(profile);
    ProfileFlags popts;
    profile->add_option("--eta0", popts.eta0);
    profile->add_option("--f0", popts.f0);
    profile->add_option("--fp0", popts.fp0);
    profile->add_option("--r-end", popts.r_end, "end of the r1 span");
    profile->add_option("--rtol", popts.rtol);
    profile->add_option("--atol", popts.atol);
    profile->add_option("--out", popts.out);

    auto *explicit_cmd = app.add_subcommand("explicit", "sample a closed-form profile");
    ParamFlags explicit_params;
    explicit_params.attach(explicit_cmd);
    ExplicitFlags eopts;
    explicit_cmd->add_option("--kind", eopts.kind)->required();
    explicit_cmd->add_option("--C", eopts.C);
    explicit_cmd->add_option("--K", eopts.K);
    explicit_cmd->add_option("--k1", eopts.k1);
    explicit_cmd->add_option("--k2", eopts.k2);
    explicit_cmd->add_option("--c", eopts.c);
    explicit_cmd->add_option("--samples", eopts.samples);
    explicit_cmd->add_option("--eta-max", eopts.eta_max);
    explicit_cmd->add_option("--out", eopts.out);
    explicit_cmd->add_option("--footer", eopts.footer, "JSON footer path (default <out>.json, or stderr)");

    auto *verify = app.add_subcommand("verify", "run the invariant suite");
    std::string grid = "default";
    verify->add_option("--grid", grid);
    verify->add_option("--tol", tol, "identity tolerance (default from SSFLOW_TOL)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (map->parsed()) {
            return cmd_map(flags, branch, tol, out, err);
        }
        if (coeffs->parsed()) {
            return cmd_coeffs(coeff_flags, out);
        }
        if (integrate->parsed()) {
            if (unified_flag && iopts.native) {
                throw Error(ErrorCode::InvalidParameter, "--unified and --native are exclusive");
            }
            return cmd_integrate(integrate_params, iopts, out, err);
        }
        if (profile->parsed()) {
            return cmd_profile(profile_params, popts, out, err);
        }
        if (explicit_cmd->parsed()) {
            return cmd_explicit(explicit_params, eopts, out, err);
        }
        return cmd_verify(grid, tol, out);
    } catch (const Error &e) {
        return report_error(err, e);
    }
}

} // namespace ssflow
