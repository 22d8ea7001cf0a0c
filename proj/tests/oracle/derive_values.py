"""Reference values frozen into the C++ tests.

Computed with sympy from the defining formulas, independently of the library. Run with
`python3 tests/oracle/derive_values.py`.
"""
import sympy as sp

R = sp.Rational


def pme_coeffs(m, n, beta):
    b = 2 * n * (m - (n - 2) / n) / (m - 1)
    s = sp.sqrt(sp.Abs(b))
    ms = (n - 2) / (n + 2)
    return dict(c1=m / (m - 1), b=b, c2=beta * s, c3=(n + 2) * (m - ms) / ((m - 1) * s))


def ple_coeffs(p, n, beta):
    pc = 2 * n / (n + 1)
    b = p * (n + 1) * (p - pc) / ((p - 2) * (p - 1))
    s = sp.sqrt(sp.Abs(b))
    ps = 2 * n / (n + 2)
    return dict(c1=(p - 1) / (p - 2), b=b, c2=beta * s, c3=(n + 2) * (p - ps) / ((p - 2) * s))


def show(label, value):
    value = sp.simplify(value)
    print(f"{label:40s} {str(value):40s} {sp.N(value, 17)}")


for k, v in ple_coeffs(R(3), R(1), R(1, 3)).items():
    show(f"ple p=3 n=1 beta=1/3 {k}", v)
for k, v in pme_coeffs(R(2), R(1), R(1, 3)).items():
    show(f"pme m=2 n=1 beta=1/3 {k}", v)
for k, v in pme_coeffs(R(1, 4), R(3), R(1)).items():
    show(f"pme m=1/4 n=3 beta=1 {k}", v)
for k, v in ple_coeffs(R(5, 4), R(5, 2), R(2, 5)).items():
    show(f"ple p=5/4 n'=5/2 beta=2/5 {k}", v)
for k, v in ple_coeffs(R(5, 4), R(5), R(-1, 5)).items():
    show(f"ple p=5/4 n'=5 beta=-1/5 {k}", v)
for k, v in pme_coeffs(R(1, 3), R(4), R(0)).items():
    show(f"pme m=1/3 n=4 beta=0 {k}", v)

# Branch maps at m=1/4, n=3.
m, n = R(1, 4), R(3)
show("n'_1(m=1/4,n=3)", (n - 2) * (m + 1) / (2 * m))
show("n'_2(m=1/4,n=3)", (n - 2) * (m + 1) / (n - 2 - n * m))
show("beta'_1/beta", 2 * m / (m + 1))
show("beta'_2/beta", (n * (m - 1) + 2) / (m + 1))

# Critical c3 with the substituted scale, symbolic in n.
nn = sp.symbols("n", positive=True)
mc = (nn - 2) / nn
show("pme critical c3", (nn + 2) * (mc - (nn - 2) / (nn + 2)) / ((mc - 1) * (nn - 2)))
pc = 2 * nn / (nn + 1)
show("ple critical c3", (nn + 2) * (pc - 2 * nn / (nn + 2)) / ((pc - 2) * nn))

# Native right-hand sides.
X, Y = sp.symbols("X Y")
m, n, beta = R(2), R(1), R(1, 3)
alpha = (1 - 2 * beta) / (m - 1)
pme_rhs = ((2 - n) * X - m * X**2 - (alpha + beta * X) * Y, (2 + (1 - m) * X) * Y)
show("pme rhs at (1,0)", sp.Matrix(pme_rhs).subs({X: 1, Y: 0}).T)
show("pme rhs at (0,1)", sp.Matrix(pme_rhs).subs({X: 0, Y: 1}).T)
p, n, beta = R(3), R(1), R(1, 3)
alpha = (1 - p * beta) / (p - 2)
gamma = p / (2 - p)
ple_rhs = ((2 - p) / (p - 1) * X * (gamma - n + alpha * Y - beta * sp.Abs(X)),
           -alpha * Y**2 + n * Y + beta * Y * sp.Abs(X) - sp.Abs(X))
show("ple xy rhs at (1,0)", sp.Matrix(ple_rhs).subs({X: 1, Y: 0}).T)
show("ple xy rhs at (2,3)", sp.Matrix(ple_rhs).subs({X: 2, Y: 3}).T)

# PLE transform at p=3, n=1, beta=1/3 and the (X, Y) = (1, 1) image.
b = ple_coeffs(p, n, beta)["b"]
s = sp.sqrt(b)
a = 1 / (b * (p - 1))
show("ple a", a)
phi = -(p - 2) / ((p - 1) * s) * (gamma - n + alpha * 1 - beta * 1)
show("ple (1,1) -> psi", a)
show("ple (1,1) -> phi", phi)

# Straight-line condition value at m=2, n=1, beta=1/2.
c = pme_coeffs(R(2), R(1), R(1, 2))
show("line condition m=2 n=1 beta=1/2", c["c1"] * c["c2"]**2 - (c["c1"] - 1) * c["c3"] * c["c2"] + (c["c1"] - 1)**2)

# Critical-limit values on Branch1: n' -> n-1, beta' -> beta (n-2)/(n-1) as m -> m_c.
eps = sp.symbols("eps")
for nv in (3, 4, 5):
    mm = R(nv - 2, nv) + eps
    n1 = (nv - 2) * (mm + 1) / (2 * mm)
    r1 = 2 * mm / (mm + 1)
    show(f"n=%d branch1 n' series" % nv, sp.series(n1, eps, 0, 2).removeO())
    show(f"n=%d branch1 beta ratio series" % nv, sp.series(r1, eps, 0, 2).removeO())

# Yamabe PLE constant at n=3, k2=1.
show("yamabe C n=3", R(12, 5) * (R(108, 5))**R(1, 4))

# Barenblatt PME mass at m=2, n=1, C=1: int (1 - x^2/6) over |x| < sqrt 6.
x = sp.symbols("x")
show("barenblatt mass m=2 n=1", sp.integrate(1 - x**2 / 6, (x, -sp.sqrt(6), sp.sqrt(6))))
