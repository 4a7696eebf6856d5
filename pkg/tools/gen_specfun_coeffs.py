"""Regenerate the frozen Chebyshev coefficients in skyrmstack._specfun_coeffs.

The large-argument branches of J0, K0 and K1 are Chebyshev expansions of the
standard scaled remainder functions (the same construction used by the classic
Cephes library), with coefficients computed here from 50-digit mpmath
reference values.  Run this script and paste its output whenever the branch
definitions change.

Mappings (x is the function argument):
  J0, x >= 5:   z = (5/x)^2 in (0, 1],  t = 2z - 1
                P(t) = sqrt(pi x / 2) * (J0 cos(chi) + Y0 sin(chi))
                Q(t) = x * sqrt(pi x / 2) * (Y0 cos(chi) - J0 sin(chi))
                with chi = x - pi/4, so that
                J0(x) = sqrt(2/(pi x)) * (P cos(chi) - (Q/x) sin(chi)).
  K0, x >= 2:   v = 2/x in (0, 1],  t = 2v - 1,  G0(t) = K0(x) e^x sqrt(x)
  K1, x >= 2:   likewise G1(t) = K1(x) e^x sqrt(x)
"""

import mpmath as mp

mp.mp.dps = 50


def cheb_fit(f, n):
    """Chebyshev coefficients of f on [-1, 1] via the Gauss-Chebyshev DCT."""
    nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    vals = [f(x) for x in nodes]
    coeffs = []
    for j in range(n):
        acc = mp.mpf(0)
        for k in range(n):
            acc += vals[k] * mp.cos(j * mp.pi * (k + mp.mpf(1) / 2) / n)
        coeffs.append(2 * acc / n)
    coeffs[0] /= 2
    return coeffs


def cheb_eval(coeffs, t):
    b0 = b1 = mp.mpf(0)
    for c in reversed(coeffs[1:]):
        b0, b1 = c + 2 * t * b0 - b1, b0
    return coeffs[0] + t * b0 - b1


def j0_pq(t):
    z = (t + 1) / 2
    x = 5 / mp.sqrt(z)
    chi = x - mp.pi / 4
    amp = mp.sqrt(mp.pi * x / 2)
    j0, y0 = mp.besselj(0, x), mp.bessely(0, x)
    p = amp * (j0 * mp.cos(chi) + y0 * mp.sin(chi))
    q = x * amp * (y0 * mp.cos(chi) - j0 * mp.sin(chi))
    return p, q


def k_tail(nu, t):
    v = (t + 1) / 2
    x = 2 / v
    return mp.besselk(nu, x) * mp.exp(x) * mp.sqrt(x)


def report(name, coeffs, check, n_check=400):
    print(f"{name} = [")
    for c in coeffs:
        print(f"    {mp.nstr(c, 20)},")
    print("]")
    worst = mp.mpf(0)
    for k in range(1, n_check):
        t = mp.mpf(-1) + 2 * mp.mpf(k) / n_check
        exact = check(t)
        approx = cheb_eval(coeffs, t)
        err = abs(approx - exact) / abs(exact)
        worst = max(worst, err)
    print(f"# max rel error on (-1, 1): {mp.nstr(worst, 3)}")


if __name__ == "__main__":
    n = 28
    report("J0_LARGE_P", cheb_fit(lambda t: j0_pq(t)[0], n), lambda t: j0_pq(t)[0])
    report("J0_LARGE_Q", cheb_fit(lambda t: j0_pq(t)[1], n), lambda t: j0_pq(t)[1])
    report("K0_TAIL", cheb_fit(lambda t: k_tail(0, t), n + 4), lambda t: k_tail(0, t))
    report("K1_TAIL", cheb_fit(lambda t: k_tail(1, t), n + 4), lambda t: k_tail(1, t))
