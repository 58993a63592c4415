#!/usr/bin/env python3
# Walk through the stationary-point structure of the phase
#   phi_{x,a}(y) = F(y) + (a/2)(x - y)^2
# as a decreases: one global minimum above the pitchfork, then a competing
# pair born at a = |f'(0)|, with a fold curve x0(a) where the left pair
# merges and disappears.
import math

import numpy as np

from enstrophy_lab import asymptotics, profiles

sine = profiles.make_sine_profile()
k = 50.0
bd = asymptotics.bifurcation_data(sine, k)

print(f"pitchfork curvature a_pf = |f'(0)|      = {bd.a_pitchfork:.6f}")
print(f"maximizer curvature a*  = |f(x*)|/x*    = {bd.a_star:.6f}")
print(f"curvature time t0 = 1/(2 k a_pf)        = {bd.t0:.6e}  (k = {k:g})")
print(f"a* corresponds to t = 1/(2 k a*)        = "
      f"{1.0 / (2.0 * k * bd.a_star):.6e}")

print("\nfold and matching points for a between a* and a_pf:")
print(f"{'a/a_pf':>8} {'x0(a)':>12} {'x1(a)':>12}")
for frac in (0.95, 0.8, float(bd.a_star / bd.a_pitchfork)):
    a = frac * bd.a_pitchfork
    print(f"{frac:8.4f} {bd.x0(a):12.8f} {bd.x1(a):12.8f}")

a = bd.a_star
x0 = bd.x0(a)
print(f"\nregimes at a = a* (x0 = {x0:.6f}):")
for x in (0.0, 0.5 * x0, 0.99 * x0, 1.5 * x0, 0.45):
    rs = asymptotics.find_roots(sine, x, a)
    extra = ""
    if rs.regime == "triple":
        extra = (f"  s+ = {rs.s_plus:+.5f}  s- = {rs.s_minus:+.5f}"
                 f"  varphi = {rs.varphi:.3e}  chi = {rs.chi:.4f}")
    else:
        extra = f"  s+ = {rs.s_plus:+.5f}"
    print(f"  x = {x:8.5f}: {rs.regime:9s}{extra}")

# chi measures the weight of the disappearing minimum; it blows up like
# (x0 - x)^(-1/4) on approach to the fold
print("\nchi on approach to the fold (expect ~ (x0 - x)^(-1/4)):")
for eps in (1e-2, 1e-4, 1e-6, 1e-8):
    rs = asymptotics.find_roots(sine, x0 - eps, a)
    print(f"  x0 - x = {eps:8.1e}:  chi = {rs.chi:12.4f}   "
          f"chi * eps^(1/4) = {rs.chi * eps ** 0.25:.4f}")

# at x = 0 the two minima are mirror images: no competition at all
rs0 = asymptotics.find_roots(sine, 0.0, a)
print(f"\nsymmetry point x = 0: varphi = {rs0.varphi:.2e}, "
      f"chi - 1 = {rs0.chi - 1.0:.2e}, s+ + s- = "
      f"{rs0.s_plus + rs0.s_minus:.2e}")
