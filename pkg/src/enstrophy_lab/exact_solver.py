"""Exact solution of u_t + 2 u u_x = u_xx on the circle via heat kernels.

With u0 = k*f(x) the substitution u = -d/dx log(psi) turns the problem into
the heat equation, and the solution at time t = 1/(2*k*a) is

    u(x, t) = -d/dx log I_{x,a}(k),
    I_{x,a}(k) = integral over R of exp(-k * phi_{x,a}(y)) dy,
    phi_{x,a}(y) = F(y) + (a/2) * (x - y)^2,   F(x) = int_0^x f.

Everything observable is a ratio of y-moments of exp(-k*phi) against the
zeroth moment, so each integral is computed in the scaled form
I = r * exp(-k*m) with m the global minimum of the phase; this keeps k in
the thousands overflow-free.  Differentiating under the integral sign gives

    u    = -a*k * r1/r0
    u_x  = u^2 + k*a - (k*a)^2 * r2/r0
    u_xx = 3*u*u_x - u^3 - ((k*a)^3 * r3 - 3*(k*a)^2 * r1) / r0

with r_j = integral of (y - x)^j * exp(-k*(phi - m)) dy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import quadrature
from .quadrature import QuadratureError
from .rootfind import bisect, newton_polish


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the phase-integral evaluation.

    quad_tolerance is the relative tolerance per moment; grid_size is the
    number of snapshot points per half period (full grid is twice that);
    domain_halfwidth overrides the automatic truncation window when set.
    """
    quad_tolerance: float = 1e-10
    domain_halfwidth: Optional[float] = None
    grid_size: int = 256
    scan_density: int = 128
    coarse_panels: int = 16
    max_refine_rounds: int = 64

    def __post_init__(self):
        if not (0.0 < self.quad_tolerance <= 1e-4):
            raise ValueError("quad_tolerance must lie in (0, 1e-4]")
        g = self.grid_size
        if g < 64 or (g & (g - 1)) != 0:
            raise ValueError("grid_size must be a power of two >= 64")
        if self.domain_halfwidth is not None and self.domain_halfwidth <= 0:
            raise ValueError("domain_halfwidth must be positive")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class ScaledIntegral:
    """I = mantissa * exp(-k * exponent); exponent is the extracted phase
    minimum, so mantissa stays O(window width)."""
    mantissa: float
    exponent: float

    def value(self, k):
        """Unscaled value; may overflow/underflow for large k, by design."""
        return self.mantissa * math.exp(-k * self.exponent)


@dataclass(frozen=True)
class PhasePoint:
    """The phase y -> F(y) + (a/2)(x-y)^2 at one (x, a), with derivatives."""
    profile: object
    x: float
    a: float

    def phi(self, y):
        y = np.asarray(y, dtype=float)
        return self.profile.F(y) + 0.5 * self.a * (self.x - y) ** 2

    def phi_prime(self, y):
        y = np.asarray(y, dtype=float)
        return self.profile.f(y) + self.a * (y - self.x)

    def phi_double_prime(self, y):
        y = np.asarray(y, dtype=float)
        return self.profile.f_prime(y) + self.a


@dataclass(frozen=True)
class StateSnapshot:
    """u and u_x sampled on the uniform circle grid at one instant."""
    k: float
    t: float
    a: float
    x_grid: np.ndarray
    u_values: np.ndarray
    ux_values: np.ndarray
    oddness_residual: float

    def __post_init__(self):
        if self.t > 0 and math.isfinite(self.a):
            if abs(2.0 * self.k * self.a * self.t - 1.0) > 1e-14:
                raise ValueError("inconsistent (t, a): need t = 1/(2*k*a)")


def _window_halfwidth(profile, a, k, config):
    """Truncation L: beyond |y - x| = L the phase exceeds its minimum by at
    least dF + log(1/tol)/k, so the discarded tail is below tolerance."""
    if config.domain_halfwidth is not None:
        return float(config.domain_halfwidth)
    dF = profile.F_max - profile.F_min
    margin = math.log(1.0 / config.quad_tolerance) / k
    return 1.0 + math.sqrt(2.0 * (dF + margin) / a)


def _stationary_points(profile, x, a, L, config):
    """All zeros of g(y) = f(y) + a*(y - x) in each row's window.

    Returns flat arrays (row, root, curvature) with curvature = f'(root)+a;
    positive curvature marks a phase minimum.
    """
    nx = len(x)
    ns = max(33, int(2 * L * config.scan_density) + 1)
    offs = np.linspace(-L, L, ns)
    ys = x[:, None] + offs[None, :]
    g = profile.f(ys) + a * (ys - x[:, None])
    sign_flip = (g[:, :-1] * g[:, 1:] < 0) | (g[:, :-1] == 0)
    rows, cols = np.nonzero(sign_flip)
    lo = ys[rows, cols]
    hi = ys[rows, cols + 1]

    def g_rows(y):
        return profile.f(y) + a * (y - x[rows])

    def dg_rows(y):
        return profile.f_prime(y) + a

    roots = bisect(g_rows, lo, hi, iters=50)
    roots = newton_polish(g_rows, dg_rows, roots, lo, hi, steps=2)
    curv = profile.f_prime(roots) + a
    return rows, roots, curv


def _phase_moments(profile, x, a, k, config, n_moments=2):
    """Scaled moments r_0..r_n of exp(-k*phi) for a batch of x values.

    Returns (m, r) with m the per-row extracted phase minimum and r of
    shape (nx, n_moments+1).  Raises QuadratureError when any row fails to
    converge, naming the offending (x, a, k).
    """
    x = np.asarray(x, dtype=float)
    nx = len(x)
    L = _window_halfwidth(profile, a, k, config)
    rows, roots, curv = _stationary_points(profile, x, a, L, config)
    is_min = curv > 0

    # per-row phase minimum (global: the window always contains it)
    m = np.full(nx, np.inf)
    if np.any(is_min):
        mr, rr = rows[is_min], roots[is_min]
        phi_min = profile.F(rr) + 0.5 * a * (x[mr] - rr) ** 2
        np.minimum.at(m, mr, phi_min)
    missing = ~np.isfinite(m)
    if np.any(missing):
        # no interior minimum found (can only happen for contrived inputs):
        # fall back to a dense scan of the phase itself
        idx = np.nonzero(missing)[0]
        yy = x[idx, None] + np.linspace(-L, L, 2049)[None, :]
        ph = profile.F(yy) + 0.5 * a * (x[idx, None] - yy) ** 2
        m[idx] = ph.min(axis=1)

    # spike width of the narrowest possible minimum; nesting ladder
    w = 1.0 / math.sqrt(k * (a + max(profile.f_prime_max, 0.0)) + 1.0)
    h_coarse = 2 * L / config.coarse_panels
    n_lad = max(1, int(math.ceil(math.log2(max(h_coarse / w, 2.0)))))
    ladder = w * 2.0 ** np.arange(n_lad + 1)
    ladder = np.concatenate([-ladder[::-1], ladder])
    coarse = np.linspace(-L, L, config.coarse_panels + 1)

    panel_rows, panel_lo, panel_hi = [], [], []
    gap = max(w / 8.0, 4e-16 * L)
    for i in range(nx):
        sel = rows == i
        ri = roots[sel]
        pts = [x[i] + coarse, ri]
        mins = ri[is_min[sel]]
        if len(mins):
            pts.append((mins[:, None] + ladder[None, :]).ravel())
        b = np.unique(np.clip(np.concatenate(pts), x[i] - L, x[i] + L))
        if len(b) > 1:
            b = np.concatenate([b[:1], b[1:][np.diff(b) > gap]])
        panel_rows.append(np.full(len(b) - 1, i, dtype=np.intp))
        panel_lo.append(b[:-1])
        panel_hi.append(b[1:])

    prow = np.concatenate(panel_rows)
    plo = np.concatenate(panel_lo)
    phi_ = np.concatenate(panel_hi)

    def integrand(ridx, ys):
        xr = x[ridx]
        d = ys - xr
        arg = -k * (profile.F(ys) + 0.5 * a * d * d - m[ridx])
        if arg.size and np.max(arg) > 45.0:
            bad = ridx[np.argmax(arg)]
            raise QuadratureError(
                f"phase fell {np.max(arg)/k:.3g} below its located minimum "
                f"at x={x[bad]:.6g}, a={a:.6g}, k={k:.6g}")
        wgt = np.exp(arg)
        comps = [wgt]
        for _ in range(n_moments):
            comps.append(comps[-1] * d)
        return np.stack(comps)

    res = quadrature.adaptive_batch(
        integrand, prow, plo, phi_, n_rows=nx,
        epsrel=config.quad_tolerance, floor_frac=1e-3,
        max_rounds=config.max_refine_rounds)
    if not res.converged.all():
        bad = np.nonzero(~res.converged)[0][:8]
        triples = ", ".join(f"(x={x[i]:.6g}, a={a:.6g}, k={k:.6g})"
                            for i in bad)
        raise QuadratureError(
            f"phase integral did not converge at {triples}"
            + (" ..." if (~res.converged).sum() > 8 else ""))
    return m, res.value


def _require_positive(a, k):
    if not (a > 0 and k > 0):
        raise ValueError(f"need a > 0 and k > 0, got a={a}, k={k}")


def eval_I(profile, x, a, k, config=None):
    """The heat-kernel integral at one point, as a ScaledIntegral."""
    _require_positive(a, k)
    cfg = config or DEFAULT_CONFIG
    m, r = _phase_moments(profile, np.array([float(x)]), a, k, cfg,
                          n_moments=0)
    return ScaledIntegral(mantissa=float(r[0, 0]), exponent=float(m[0]))


def eval_fields(profile, x, a, k, config=None, want_uxx=False):
    """u, u_x (and optionally u_xx) on an array of x values.

    This is the batch workhorse: one adaptive pass shares panels across all
    requested points and all moments.
    """
    _require_positive(a, k)
    cfg = config or DEFAULT_CONFIG
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n_mom = 3 if want_uxx else 2
    _, r = _phase_moments(profile, x, a, k, cfg, n_moments=n_mom)
    ka = k * a
    q1 = r[:, 1] / r[:, 0]
    q2 = r[:, 2] / r[:, 0]
    u = -ka * q1
    ux = u * u + ka - ka ** 2 * q2
    if not want_uxx:
        return u, ux
    q3 = r[:, 3] / r[:, 0]
    uxx = 3 * u * ux - u ** 3 - (ka ** 3 * q3 - 3 * ka ** 2 * q1)
    return u, ux, uxx


def eval_u(profile, x, a, k, config=None):
    """Pointwise exact u at (x, a)."""
    u, _ = eval_fields(profile, [float(x)], a, k, config)
    return float(u[0])


def eval_ux(profile, x, a, k, config=None):
    """Pointwise exact u_x at (x, a)."""
    _, ux = eval_fields(profile, [float(x)], a, k, config)
    return float(ux[0])


def _snapshot_core(profile, t, a, k, cfg):
    n = 2 * cfg.grid_size
    xg = (np.arange(n) - n // 2) / n
    if a is None:          # t == 0: initial data, no integrals involved
        u = k * profile.f(xg)
        ux = k * profile.f_prime(xg)
        a_out = math.inf
    else:
        u, ux = eval_fields(profile, xg, a, k, cfg)
        a_out = a
    mirror = (n - np.arange(n)) % n
    odd = float(np.max(np.abs(u + u[mirror])))
    return StateSnapshot(k=k, t=t, a=a_out, x_grid=xg, u_values=u,
                         ux_values=ux, oddness_residual=odd)


def snapshot(profile, t, k, config=None):
    """State at time t >= 0 on the standard grid.

    The time enters only through a = 1/(2*k*t); snapshot_at_a with that a
    produces bit-identical fields.
    """
    cfg = config or DEFAULT_CONFIG
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return _snapshot_core(profile, 0.0, None, k, cfg)
    return _snapshot_core(profile, t, 1.0 / (2.0 * k * t), k, cfg)


def snapshot_at_a(profile, a, k, config=None):
    """State at curvature parameter a > 0 (same machinery as snapshot)."""
    _require_positive(a, k)
    cfg = config or DEFAULT_CONFIG
    return _snapshot_core(profile, 1.0 / (2.0 * k * a), a, k, cfg)
