"""Independent high-precision oracles frozen into the C++ tests.

Run with: python3 tests/oracles/compute_oracles.py
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 40

print("# square well scattering length, R = 1, from the continuity ratio")
for gamma in ["0.5", "1", "2", "5", "10"]:
    g = mp.mpf(gamma)
    ratio = (1 - mp.e**(-2 * g)) / (g - 1 + mp.e**(-2 * g) * (g + 1))
    # (R - a)/a = ratio, solved by bisection to stay independent of the closed form
    f = lambda a: (1 - a) / a - ratio
    a = mp.findroot(f, (mp.mpf("1e-6"), mp.mpf(1)), solver="bisect")
    print(gamma, mp.nstr(a, 25))

print("# LHY integral: int_{R^3} p^2 G(8 pi x / p^2) dp at x = 1")
# cancellation-free form: G(t) = t^3 (2/(s+1) + 1) / (2 (s+1+t)), s = sqrt(1+2t)
G = lambda t: t**3 * (2 / (mp.sqrt(1 + 2 * t) + 1) + 1) / (2 * (mp.sqrt(1 + 2 * t) + 1 + t))
x = mp.mpf(1)
c = mp.mpf(8) * mp.pi * x
val = 4 * mp.pi * mp.quad(lambda p: p**4 * G(c / p**2), [0, 1, 10, 100, mp.inf])
print("numeric ", mp.nstr(val, 25))
print("closed  ", mp.nstr(64 * mp.pi**4 * 128 / (15 * mp.sqrt(mp.pi)), 25))

print("# free Bose gas: (2pi)^-3 int log(1 - exp(-p^2)) dp")
series = -mp.pi**1.5 * mp.zeta(2.5) / (8 * mp.pi**3)
quad = 4 * mp.pi * mp.quad(lambda p: p**2 * mp.log(-mp.expm1(-p**2)), [0, 1, 3, mp.inf]) / (2 * mp.pi)**3
print("series ", mp.nstr(series, 25))
print("quad   ", mp.nstr(quad, 25))

print("# radial bump f(r) = (1 - r^2/R^2)^3, R = 1: closed-form Fourier transform")
r, p = sp.symbols("r p", positive=True)
fhat = sp.simplify(4 * sp.pi * sp.integrate((1 - r**2)**3 * sp.sin(p * r) * r / p, (r, 0, 1)))
print("fhat(p) =", fhat)
print("fhat(0) =", sp.limit(fhat, p, 0))
for pv in ["0.5", "1", "2.5", "7"]:
    print(pv, sp.N(fhat.subs(p, sp.Rational(pv)), 25))

print("# Ewald continuation of sum'_{n in Z^3} |n|^-2 (lattice constant of the 1/k^2 sum)")
N = 6
acc = mp.mpf(0)
for i in range(-N, N + 1):
    for j in range(-N, N + 1):
        for k in range(-N, N + 1):
            m = i * i + j * j + k * k
            if m == 0:
                continue
            x = mp.pi * m
            acc += mp.gammainc(1, x) / x + mp.gammainc(mp.mpf(1) / 2, x) / mp.sqrt(x)
Z1 = mp.pi * (acc - 1 - 2)
print("Z(1) =", mp.nstr(Z1, 20))
print("-4 Z(1) =", mp.nstr(-4 * Z1, 20))
