"""Initial-condition profiles on the unit circle T = [-1/2, 1/2].

A profile is the shape function f in the odd initial data u0(x) = k*f(x).
Admissibility, matching the hypotheses under which the exact solution is
analyzed, means:

    * f is odd and 1-periodic, f(0) = f(1/2) = 0,
    * f < 0 on (0, 1/2)  (so u0 transports mass toward x = 0),
    * f'' >= 0 on [0, 1/2]  (one-sided convexity),
    * f' has the single interior zero x_star on (0, 1/2), f'(0) < 0.

Profiles carry closures for f, f', f'', f''' and the antiderivative
F(x) = int_0^x f, plus a few cached ranges the solver uses to size its
integration window.  Anything not supplied analytically is reconstructed
from a sine series fitted on a dense grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .rootfind import bisect, newton_polish

_TWO_PI = 2.0 * math.pi


class ProfileError(ValueError):
    """Raised when a candidate profile violates an admissibility invariant."""


@dataclass(frozen=True)
class Profile:
    """Bundle of shape-function closures and cached constants."""
    f: Callable[[np.ndarray], np.ndarray]
    f_prime: Callable[[np.ndarray], np.ndarray]
    f_double_prime: Callable[[np.ndarray], np.ndarray]
    f_triple_prime: Callable[[np.ndarray], np.ndarray]
    F: Callable[[np.ndarray], np.ndarray]
    x_star: float
    f_prime_at_zero: float
    f_prime_max: float
    F_min: float
    F_max: float
    label: str = "custom"

    def __repr__(self):  # closures make the default repr useless
        return (f"Profile({self.label!r}, x_star={self.x_star:.6g}, "
                f"f'(0)={self.f_prime_at_zero:.6g})")


def make_sine_profile() -> Profile:
    """The reference profile f(x) = -2*pi*sin(2*pi*x).

    Everything is closed-form: F(x) = cos(2*pi*x) - 1, x_star = 1/4,
    f'(0) = -4*pi^2.
    """
    def f(x):
        return -_TWO_PI * np.sin(_TWO_PI * np.asarray(x, dtype=float))

    def fp(x):
        return -_TWO_PI ** 2 * np.cos(_TWO_PI * np.asarray(x, dtype=float))

    def fpp(x):
        return _TWO_PI ** 3 * np.sin(_TWO_PI * np.asarray(x, dtype=float))

    def fppp(x):
        return _TWO_PI ** 4 * np.cos(_TWO_PI * np.asarray(x, dtype=float))

    def F(x):
        return np.cos(_TWO_PI * np.asarray(x, dtype=float)) - 1.0

    return Profile(f=f, f_prime=fp, f_double_prime=fpp, f_triple_prime=fppp,
                   F=F, x_star=0.25, f_prime_at_zero=-_TWO_PI ** 2,
                   f_prime_max=_TWO_PI ** 2, F_min=-2.0, F_max=0.0,
                   label="sine")


def make_sine_series_profile(coeffs: Sequence[float], validate: bool = True,
                             label: Optional[str] = None) -> Profile:
    """Profile f(x) = -sum_n a_n sin(2*pi*n*x) from coefficients a_1, a_2, ...

    All derivatives and F are exact term-by-term.  With validate=True the
    admissibility invariants are checked on a dense grid and violations
    raise ProfileError; validate=False skips that (useful for building
    deliberately bad profiles to exercise validate_profile).
    """
    a = np.asarray(coeffs, dtype=float)
    if a.ndim != 1 or len(a) == 0:
        raise ProfileError("need a non-empty 1-d coefficient sequence")
    n = np.arange(1, len(a) + 1, dtype=float)
    wn = _TWO_PI * n

    def f(x):
        x = np.asarray(x, dtype=float)
        return -np.sin(np.multiply.outer(x, wn)) @ a

    def fp(x):
        x = np.asarray(x, dtype=float)
        return -np.cos(np.multiply.outer(x, wn)) @ (a * wn)

    def fpp(x):
        x = np.asarray(x, dtype=float)
        return np.sin(np.multiply.outer(x, wn)) @ (a * wn ** 2)

    def fppp(x):
        x = np.asarray(x, dtype=float)
        return np.cos(np.multiply.outer(x, wn)) @ (a * wn ** 3)

    def F(x):
        x = np.asarray(x, dtype=float)
        return (np.cos(np.multiply.outer(x, wn)) - 1.0) @ (a / wn)

    fp0 = float(-np.sum(a * wn))
    prof = _finish_profile(f, fp, fpp, fppp, F, fp0,
                           label=label or f"sine-series[{len(a)}]")
    if validate:
        _raise_on_violation(prof)
    return prof


def _finish_profile(f, fp, fpp, fppp, F, fp0, label):
    """Fill in x_star and the cached ranges from dense samples."""
    grid = np.linspace(-0.5, 0.5, 4097)
    Fg = F(grid)
    fpg = fp(grid)
    x_star = _find_x_star(fp, fpp)
    return Profile(f=f, f_prime=fp, f_double_prime=fpp, f_triple_prime=fppp,
                   F=F, x_star=x_star, f_prime_at_zero=fp0,
                   f_prime_max=float(np.max(fpg)),
                   F_min=float(np.min(Fg)), F_max=float(np.max(Fg)),
                   label=label)


def _find_x_star(fp, fpp):
    """Interior zero of f' on (0, 1/2): bisection, then one Newton polish."""
    lo, hi = 1e-9, 0.5 - 1e-9
    if not (fp(lo) < 0 < fp(hi)):
        return math.nan
    r = bisect(fp, np.array([lo]), np.array([hi]), iters=48)
    r = newton_polish(fp, fpp, r, lo, hi, steps=1)
    return float(r[0])


def make_custom_profile(source=None, *, f=None, f_prime=None,
                        f_double_prime=None, f_triple_prime=None, F=None,
                        coeffs=None, samples=None, n_grid=4096,
                        validate=True, label="custom") -> Profile:
    """Build a profile from whatever the caller has.

    Accepted inputs (the positional `source` is sniffed by type):
      * a coefficient sequence  -> same as make_sine_series_profile,
      * an array of samples of f on the uniform grid x_j = j/n - 1/2,
      * a callable f, optionally with analytic derivative / antiderivative
        closures passed by keyword.

    Missing derivatives are filled in from a sine-series fit of f on an
    n_grid-point grid; supplied closures always win over the fit.  The
    admissibility invariants are enforced unless validate=False.
    """
    if source is not None:
        if callable(source):
            f = source
        elif np.ndim(source) == 1 and len(np.asarray(source)) > 8 and samples is None and coeffs is None:
            samples = np.asarray(source, dtype=float)
        else:
            coeffs = source
    if coeffs is not None:
        return make_sine_series_profile(coeffs, validate=validate, label=label)

    if samples is not None:
        s = np.asarray(samples, dtype=float)
        if s.ndim != 1 or len(s) < 16 or len(s) % 2:
            raise ProfileError("samples must be a 1-d array of even length >= 16")
        a = _series_from_samples(s)
        return make_sine_series_profile(a, validate=validate, label=label)

    if f is None:
        raise ProfileError("nothing to build a profile from")

    xs = np.arange(n_grid) / n_grid - 0.5
    a = _series_from_samples(np.asarray(f(xs), dtype=float))
    fitted = make_sine_series_profile(a, validate=False, label=label)
    prof = replace(
        fitted,
        f=f,
        f_prime=f_prime or fitted.f_prime,
        f_double_prime=f_double_prime or fitted.f_double_prime,
        f_triple_prime=f_triple_prime or fitted.f_triple_prime,
        F=F or fitted.F,
    )
    # x_star from the closure actually stored, not from the fit
    fp = prof.f_prime
    d2 = prof.f_double_prime
    prof = replace(prof, x_star=_find_x_star(fp, d2),
                   f_prime_at_zero=float(fp(0.0)))
    if validate:
        _raise_on_violation(prof)
    return prof


def _series_from_samples(s):
    """Sine coefficients of odd periodic samples on x_j = j/n - 1/2.

    The half-period shift flips the sign of the odd harmonics, hence the
    (-1)^m factor.  The cosine/mean content must vanish for odd data; it is
    checked rather than silently discarded.
    """
    n = len(s)
    spec = np.fft.rfft(s)
    scale = np.max(np.abs(s)) + 1e-300
    even_part = np.max(np.abs(spec.real)) / (n * scale)
    if even_part > 1e-8:
        raise ProfileError(f"samples are not odd (even residual {even_part:.2e})")
    m = np.arange(len(spec))
    b = -2.0 * spec.imag / n * (-1.0) ** m   # f = sum b_m sin(2 pi m x)
    a = -b[1:]                               # our convention: f = -sum a_m sin
    keep = np.max(np.abs(a)) * 1e-13
    last = int(np.max(np.nonzero(np.abs(a) > keep)[0])) + 1 if np.any(np.abs(a) > keep) else 1
    return a[:last]


# ----------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class ProfileReport:
    """Grid residuals of every admissibility invariant; zeros mean clean."""
    oddness: float
    endpoints: float
    sign_violation: float
    convexity_violation: float
    fprime_zero_residual: float
    antiderivative_residual: float
    F_evenness: float
    scale: float
    names: tuple = field(default_factory=tuple)

    def violations(self):
        return self.names

    @property
    def ok(self):
        return not self.names


def validate_profile(profile: Profile, n_grid: int = 4096) -> ProfileReport:
    """Check the admissibility invariants on a dense grid.

    Purely a reporting operation: nothing raises, the report carries the
    residuals and the list of violated invariant names.  Tolerances are
    relative to the profile's own scale except where noted.
    """
    xs = np.linspace(0.0, 0.5, n_grid + 1)
    fv = profile.f(xs)
    scale = float(np.max(np.abs(fv))) + 1e-300

    odd = float(np.max(np.abs(profile.f(-xs) + fv)))
    ends = float(max(abs(profile.f(0.0)), abs(profile.f(0.5))))
    interior = fv[1:-1]
    sign = float(max(np.max(interior), 0.0)) if len(interior) else 0.0

    d2 = profile.f_double_prime(xs)
    d2scale = max(1.0, float(np.max(np.abs(d2))))
    convex = float(max(-np.min(d2), 0.0))

    fp_res = (abs(float(profile.f_prime(profile.x_star)))
              if math.isfinite(profile.x_star) else math.inf)

    h = xs[1] - xs[0]
    Fv = profile.F(xs)
    fd = (Fv[2:] - Fv[:-2]) / (2 * h)
    anti = float(np.max(np.abs(fd - fv[1:-1])))
    F_even = float(np.max(np.abs(profile.F(-xs) - Fv)))

    names = []
    if odd > 1e-9 * scale:
        names.append("oddness")
    if ends > 1e-9 * scale:
        names.append("endpoints")
    if sign > 1e-9 * scale:
        names.append("sign")
    if convex > 1e-10 * d2scale:
        names.append("convexity")
    if not fp_res < 1e-7 * scale:
        names.append("critical-point")
    # central differences are O(h^2) with an f'' coefficient
    if anti > h * h * d2scale:
        names.append("antiderivative")
    if F_even > 1e-9 * max(scale, abs(profile.F_min), abs(profile.F_max)):
        names.append("F-evenness")

    return ProfileReport(oddness=odd, endpoints=ends, sign_violation=sign,
                         convexity_violation=convex,
                         fprime_zero_residual=fp_res,
                         antiderivative_residual=anti, F_evenness=F_even,
                         scale=scale, names=tuple(names))


def _raise_on_violation(profile):
    rep = validate_profile(profile)
    if not rep.ok:
        raise ProfileError(
            "profile violates admissibility invariant(s): "
            + ", ".join(rep.names))
