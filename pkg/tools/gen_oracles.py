"""Regenerate the frozen oracle values used in the test suite.

Every constant asserted in tests/ that is not a hand-checkable identity was
produced here, by methods independent of the production code paths:

* special-function references: mpmath at 30+ digits, plus the stated
  integral representations (K0 via int_0^inf exp(-x cosh t) dt, Lambert W
  via bisection, elliptic integrals via direct theta-quadrature);
* shape-function spot values: mpmath tanh-sinh quadrature of the defining
  Bessel-product integrals, partitioned at the J0 zeros;
* the two-layer stack energy: a literal transcription of the reduced energy
  sum evaluated with the mpmath shape-function values.

Run and paste into the tests when a frozen value needs to change.
"""

import mpmath as mp

mp.mp.dps = 30


def k0_cosh_integral(x):
    # exp(-x cosh t) < 1e-70 past the cutoff; infinite-interval tanh-sinh
    # hangs under the gmpy backend, so integrate on a finite range
    tmax = mp.asinh(170 / x)
    return mp.quad(lambda t: mp.exp(-x * mp.cosh(t)), [0, tmax])


def ellipk_theta(m):
    return mp.quad(lambda th: 1 / mp.sqrt(1 - m * mp.sin(th) ** 2), [0, mp.pi / 2])


def ellipe_theta(m):
    return mp.quad(lambda th: mp.sqrt(1 - m * mp.sin(th) ** 2), [0, mp.pi / 2])


def lambert_bisect(x, lo=-50.0, hi=-1.0):
    f = lambda w: w * mp.exp(w) - x
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    for _ in range(220):
        mid = (lo + hi) / 2
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


_NORM = {"vv": lambda: 32 / (3 * mp.pi**2), "ss": lambda: 32 / mp.pi**2, "vs": lambda: mp.mpf(2)}
_ORDERS = {"vv": (1, 1), "ss": (0, 0), "vs": (0, 1)}


def shape_quad(kind, alpha, lam):
    """Defining integral by tanh-sinh quadrature on J0-zero-partitioned segments."""
    na, nb = _ORDERS[kind]
    f = lambda x: x**2 * mp.besselj(0, lam * x) * mp.besselk(na, alpha * x) * mp.besselk(nb, x / alpha)
    ximax = 170 / (alpha + 1 / alpha)  # K-product tail below 1e-70 past here
    edges = [0]
    k = 1
    while lam > 0:
        z = mp.besseljzero(0, k) / lam
        if z >= ximax:
            break
        edges.append(z)
        k += 1
    edges.append(ximax)
    return _NORM[kind]() * mp.quad(f, edges)


def stack_energy_2layer(delta_bar, rho, theta, sep, L):
    """Literal term-by-term sum of the two-layer stack energy (with L kept)."""
    gamma = mp.euler
    total = mp.mpf(0)
    for n in range(2):
        total += 4 * mp.pi / L[n] ** 2
        total += 4 * mp.pi * rho[n] ** 2 * mp.log(4 * L[n] ** 2 / mp.exp(2 * (1 + gamma)))
        total += delta_bar * mp.pi**3 / 8 * rho[n] * (3 * mp.cos(theta[n]) ** 2 - 1)
    alpha = mp.sqrt(rho[1] / rho[0])
    beta = mp.sqrt(rho[0] * rho[1])
    lam = sep / beta
    fvv = shape_quad("vv", alpha, lam)
    fss = shape_quad("ss", alpha, lam)
    fvs = shape_quad("vs", alpha, lam)
    fsv = shape_quad("vs", 1 / alpha, lam)
    total += delta_bar * mp.pi**3 / 4 * beta * (3 * mp.cos(theta[0]) * mp.cos(theta[1]) * fvv - fss)
    total -= 4 * mp.pi * delta_bar * beta * (mp.cos(theta[0]) * fvs - mp.cos(theta[1]) * fsv)
    return total


def show(label, value, digits=22):
    print(f"{label} = {mp.nstr(value, digits)}")


if __name__ == "__main__":
    show("K0(1) cosh-integral", k0_cosh_integral(1))
    show("K(0.3) quadrature", ellipk_theta(mp.mpf("0.3")))
    show("E(0.3) quadrature", ellipe_theta(mp.mpf("0.3")))
    show("K(0.5)", ellipk_theta(mp.mpf("0.5")))
    show("E(0.5)", ellipe_theta(mp.mpf("0.5")))
    show("K(-3)", ellipk_theta(mp.mpf(-3)))
    show("E(-3)", ellipe_theta(mp.mpf(-3)))
    show("W_-1(-0.1) bisection", lambert_bisect(mp.mpf("-0.1")))
    show("W_-1(-0.05)", lambert_bisect(mp.mpf("-0.05")))
    show("W_-1(-0.3)", lambert_bisect(mp.mpf("-0.3")))
    for x in (0.5, 1.0, 2.0, 3.7, 5.0, 7.3, 11.0, 24.5, 63.0):
        show(f"J0({x})", mp.besselj(0, mp.mpf(x)))
    for x in (0.05, 0.5, 1.0, 1.9, 2.0, 2.1, 6.0, 30.0):
        show(f"K0({x})", mp.besselk(0, mp.mpf(x)))
        show(f"K1({x})", mp.besselk(1, mp.mpf(x)))
    show("f_ss(0.8, 1.3) tanh-sinh", shape_quad("ss", mp.mpf("0.8"), mp.mpf("1.3")))
    show("f_vv(0.7, 2.0) tanh-sinh", shape_quad("vv", mp.mpf("0.7"), mp.mpf("2.0")))
    show("f_vs(1.6, 0.9) tanh-sinh", shape_quad("vs", mp.mpf("1.6"), mp.mpf("0.9")))
    show("f_vs(0.625, 0.9) tanh-sinh", shape_quad("vs", mp.mpf("0.625"), mp.mpf("0.9")))
    show("f_vv(1, 0.75) tanh-sinh", shape_quad("vv", mp.mpf(1), mp.mpf("0.75")))
    show("f_ss(1, 2.0) tanh-sinh", shape_quad("ss", mp.mpf(1), mp.mpf("2.0")))
    show("f_vs(1, 1.0) tanh-sinh", shape_quad("vs", mp.mpf(1), mp.mpf("1.0")))
    show(
        "F_2 full (d=0.25 rho=(.05,.08) th=(.3,-2) r=.1 L=(12,15))",
        stack_energy_2layer(
            mp.mpf("0.25"),
            [mp.mpf("0.05"), mp.mpf("0.08")],
            [mp.mpf("0.3"), mp.mpf("-2.0")],
            mp.mpf("0.1"),
            [mp.mpf(12), mp.mpf(15)],
        ),
    )
