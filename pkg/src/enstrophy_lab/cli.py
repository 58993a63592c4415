"""Batch front end: one run config in, CSV/JSON artifacts out.

Modes:
  solve     exact snapshots + diagnostics at the requested times
  asym      leading-order predictions and an asymptotic-vs-exact error table
  sweep     enstrophy-maximum scaling sweep over a geometric k list
  validate  profile admissibility, bifurcation and sign-structure checks

All numbers are written with 17 significant digits and fixed ordering, so
identical configs produce byte-identical files.  Every CSV column and JSON
value is tagged in the JSON "provenance" block with the (module, operation)
pair that produced it.

Exit codes: 0 success, 2 config error, 3 numerical failure.
"""

import argparse
import configparser
import math
import os
import sys

import numpy as np

from . import asymptotics
from . import diagnostics
from . import exact_solver
from . import harness
from . import profiles
from . import spectral_oracle
from .quadrature import QuadratureError

MODES = ("solve", "asym", "sweep", "validate")

# keys accepted in the [run] section of a config file; mirrors the flags
CONFIG_KEYS = ("profile", "mode", "k", "k_list", "t", "out_dir",
               "quad_tol", "grid_size", "oracle")


class ConfigError(ValueError):
    """Bad flags or config file; maps to exit code 2."""


# ----------------------------------------------------------------------
# deterministic formatting

def fmt(v):
    """17-significant-digit text for a float, plain text for the rest."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if v == 0.0:
            v = 0.0          # print negative zero as 0
        return format(v, ".17g")
    return str(v)


def _json_fragment(obj, indent, out):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            out.append(pad + '  "' + str(key) + '": ')
            _json_fragment(val, indent + 1, out)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, val in enumerate(seq):
            out.append(pad + "  ")
            _json_fragment(val, indent + 1, out)
            out.append(",\n" if i + 1 < len(seq) else "\n")
        out.append(pad + "]")
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isfinite(v):
            out.append(format(0.0 if v == 0.0 else v, ".17g"))
        else:
            # keep the file valid JSON; readers get a string marker
            out.append('"' + fmt(v) + '"')
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def json_text(obj):
    """Hand-rolled JSON writer: insertion-ordered keys, 17g floats.

    The stdlib encoder does not expose float formatting, and the output
    contract here is byte-level, so the few supported types are emitted
    directly.
    """
    out = []
    _json_fragment(obj, 0, out)
    out.append("\n")
    return "".join(out)


def csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(out_dir, name, text, written):
    path = os.path.join(out_dir, name)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    written.append(name)
    print(f"wrote {path}")


# ----------------------------------------------------------------------
# configuration

def parse_float_list(text, what):
    try:
        vals = [float(p) for p in str(text).replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated numbers, "
                          f"got {text!r}") from None
    if not vals:
        raise ConfigError(f"{what}: empty list")
    return vals


def make_profile(spec):
    spec = (spec or "sine").strip()
    if spec == "sine":
        return profiles.make_sine_profile()
    coeffs = parse_float_list(spec, "profile")
    try:
        return profiles.make_sine_series_profile(coeffs)
    except profiles.ProfileError as err:
        raise ConfigError(f"profile {spec!r}: {err}") from None


def read_config_file(path):
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from None
    except configparser.Error as err:
        raise ConfigError(f"malformed config file: {err}") from None
    sections = parser.sections()
    if sections not in ([], ["run"]):
        bad = [s for s in sections if s != "run"]
        raise ConfigError(f"unknown config section(s): {', '.join(bad)}")
    out = {}
    if "run" in parser:
        for key, val in parser["run"].items():
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown config key: {key}")
            out[key] = val
    return out


def _parse_bool(text):
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


class RunConfig:
    """Validated settings for one run; run() consumes this."""

    def __init__(self, mode, profile_spec="sine", k=None, k_list=None,
                 times=None, out_dir="enstrophy-out", quad_tol=None,
                 grid_size=None, oracle=False):
        if mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}; "
                              f"got {mode!r}")
        self.mode = mode
        self.profile_spec = profile_spec or "sine"
        self.k = None if k is None else float(k)
        self.k_list = None if k_list is None else tuple(float(v)
                                                        for v in k_list)
        self.times = None if times is None else tuple(float(t)
                                                      for t in times)
        self.out_dir = out_dir or "enstrophy-out"
        self.quad_tol = None if quad_tol is None else float(quad_tol)
        self.grid_size = None if grid_size is None else int(grid_size)
        self.oracle = bool(oracle)

        if self.mode in ("solve", "asym"):
            if self.k is None or not self.k > 0:
                raise ConfigError(f"mode {mode!r} needs --k > 0")
        if self.mode == "solve":
            if not self.times:
                raise ConfigError("mode 'solve' needs --t (comma-separated "
                                  "times >= 0)")
            if any(t < 0 for t in self.times):
                raise ConfigError("times must be >= 0")
        if self.mode == "sweep":
            if not self.k_list:
                raise ConfigError("mode 'sweep' needs --k-list")
            if len(self.k_list) < 4:
                raise ConfigError("--k-list needs at least 4 values")
        # surface bad numeric knobs at parse time (exit 2), not mid-run
        self.solver_config()

    def solver_config(self):
        kw = {}
        if self.quad_tol is not None:
            kw["quad_tolerance"] = self.quad_tol
        if self.grid_size is not None:
            kw["grid_size"] = self.grid_size
        try:
            return exact_solver.SolverConfig(**kw)
        except ValueError as err:
            raise ConfigError(str(err)) from None

    def echo(self):
        return {
            "mode": self.mode,
            "profile": self.profile_spec,
            "k": self.k,
            "k_list": list(self.k_list) if self.k_list else None,
            "t": list(self.times) if self.times else None,
            "out_dir": self.out_dir,
            "quad_tol": self.quad_tol,
            "grid_size": self.grid_size,
            "oracle": self.oracle,
        }


def build_config(argv):
    ap = argparse.ArgumentParser(
        prog="enstrophy-lab",
        description="Exact Burgers dynamics, enstrophy-growth asymptotics "
                    "and scaling sweeps on the unit circle.")
    ap.add_argument("--config", help="INI file with a [run] section; "
                                     "flags override its values")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--profile",
                    help="'sine' or comma-separated coefficients a_n of "
                         "-sum a_n sin(2 pi n x)  (default sine)")
    ap.add_argument("--k", type=float, help="amplitude factor")
    ap.add_argument("--k-list", help="comma-separated k values (sweep)")
    ap.add_argument("--t", help="comma-separated times (solve)")
    ap.add_argument("--out-dir", help="artifact directory "
                                      "(default enstrophy-out)")
    ap.add_argument("--quad-tol", type=float,
                    help="relative quadrature tolerance")
    ap.add_argument("--grid-size", type=int,
                    help="snapshot points per half period (power of two)")
    ap.add_argument("--oracle", action="store_true", default=None,
                    help="cross-check solve output against the spectral "
                         "time stepper")
    try:
        args = ap.parse_args(argv)
    except SystemExit as err:
        if err.code == 0:       # --help
            raise
        # argparse exits 2 on bad flags, which matches the contract, but
        # rethrow as ConfigError so main() owns the exit path
        raise ConfigError("invalid command line") from err

    raw = read_config_file(args.config) if args.config else {}
    if args.mode is not None:
        raw["mode"] = args.mode
    if args.profile is not None:
        raw["profile"] = args.profile
    if args.k is not None:
        raw["k"] = args.k
    if args.k_list is not None:
        raw["k_list"] = args.k_list
    if args.t is not None:
        raw["t"] = args.t
    if args.out_dir is not None:
        raw["out_dir"] = args.out_dir
    if args.quad_tol is not None:
        raw["quad_tol"] = args.quad_tol
    if args.grid_size is not None:
        raw["grid_size"] = args.grid_size
    if args.oracle is not None:
        raw["oracle"] = args.oracle

    if "mode" not in raw:
        raise ConfigError("no mode given (flag --mode or config key)")

    try:
        k = float(raw["k"]) if "k" in raw else None
        quad_tol = float(raw["quad_tol"]) if "quad_tol" in raw else None
        grid_size = int(raw["grid_size"]) if "grid_size" in raw else None
    except ValueError as err:
        raise ConfigError(str(err)) from None
    k_list = (parse_float_list(raw["k_list"], "k_list")
              if "k_list" in raw else None)
    times = parse_float_list(raw["t"], "t") if "t" in raw else None
    oracle = raw.get("oracle", False)
    if not isinstance(oracle, bool):
        oracle = _parse_bool(oracle)

    return RunConfig(mode=raw["mode"], profile_spec=raw.get("profile"),
                     k=k, k_list=k_list, times=times,
                     out_dir=raw.get("out_dir"), quad_tol=quad_tol,
                     grid_size=grid_size, oracle=oracle)


# ----------------------------------------------------------------------
# modes

def _run_solve(cfg, profile, written):
    scfg = cfg.solver_config()
    times = sorted(set(cfg.times))
    oracle_snaps = {}
    if cfg.oracle and max(times) > 0:
        ocfg = spectral_oracle.OracleConfig(
            snapshot_points=2 * scfg.grid_size)
        snaps = spectral_oracle.integrate(profile, cfg.k, max(times),
                                          times, ocfg)
        oracle_snaps = dict(zip(times, snaps))

    diag_rows = []
    for idx, t in enumerate(times):
        snap = exact_solver.snapshot(profile, t, cfg.k, scfg)
        rows = list(zip(snap.x_grid, snap.u_values, snap.ux_values))
        _emit(cfg.out_dir, f"snapshot_{idx:03d}.csv",
              csv_text(("x", "u", "ux"), rows), written)
        diag = diagnostics.compute(snap)
        row = [t, diag.K, diag.E, diag.R, diag.bound_R_residual,
               diag.poincare_residual, diag.tail_fraction,
               snap.oddness_residual]
        if cfg.oracle:
            osnap = oracle_snaps.get(t)
            row.append(float(np.max(np.abs(snap.u_values - osnap.u_values)))
                       if osnap is not None else 0.0)
        diag_rows.append(row)

    header = ["t", "K", "E", "R", "bound_R_residual", "poincare_residual",
              "tail_fraction", "oddness_residual"]
    if cfg.oracle:
        header.append("oracle_sup_diff")
    _emit(cfg.out_dir, "diagnostics.csv", csv_text(header, diag_rows),
          written)

    provenance = {
        "snapshot_*.csv:x,u,ux": "exact_solver.snapshot",
        "diagnostics.csv:K,E,R,bound_R_residual,poincare_residual,"
        "tail_fraction": "diagnostics.compute",
        "diagnostics.csv:oddness_residual": "exact_solver.snapshot",
    }
    if cfg.oracle:
        provenance["diagnostics.csv:oracle_sup_diff"] = \
            "spectral_oracle.integrate"
    summary = {
        "config": cfg.echo(),
        "times": list(times),
        "snapshots": [f"snapshot_{i:03d}.csv" for i in range(len(times))],
        "provenance": provenance,
    }
    _emit(cfg.out_dir, "solve.json", json_text(summary), written)
    return True


def _run_asym(cfg, profile, written):
    k = cfg.k
    pred = asymptotics.predict(profile, k)
    bif = asymptotics.bifurcation_data(profile, k)
    E0 = diagnostics.initial_enstrophy(profile, k)
    K0 = diagnostics.initial_energy(profile, k)

    apf = bif.a_pitchfork
    cases = (("single", 2.0 * apf), ("post-fold", bif.a_star))
    xs = np.linspace(1.0 / 128.0, 0.5 - 1.0 / 128.0, 63)
    scfg = cfg.solver_config()
    rows = []
    sup = {}
    for label, a in cases:
        u_exact, _ = exact_solver.eval_fields(profile, xs, a, k, scfg)
        u_asym = asymptotics.asymptotic_u(profile, xs, a, k)
        err = np.abs(u_exact - u_asym)
        sup[label] = {"a": a, "sup_error": float(np.max(err)),
                      "sup_u": float(np.max(np.abs(u_exact)))}
        for x, ue, ua, e in zip(xs, u_exact, u_asym, err):
            rows.append((label, a, x, ue, ua, e))
    _emit(cfg.out_dir, "asym_error.csv",
          csv_text(("regime", "a", "x", "u_exact", "u_asym", "abs_error"),
                   rows), written)

    summary = {
        "config": cfg.echo(),
        "predictions": {
            "T_star": pred.T_star,
            "E_max_leading": pred.E_max_leading,
            "K_drop_leading": pred.K_drop_leading,
            "K_at_max_leading": pred.K_at_max_leading,
        },
        "bifurcation": {
            "t0": bif.t0,
            "a_pitchfork": bif.a_pitchfork,
            "a_star": bif.a_star,
            "x0_at_a_star": bif.x0(bif.a_star),
            "x1_at_a_star": bif.x1(bif.a_star),
        },
        "initial": {"E0": E0, "K0": K0},
        "error_table": sup,
        "provenance": {
            "predictions": "asymptotics.predict",
            "bifurcation": "asymptotics.bifurcation_data",
            "initial.E0": "diagnostics.initial_enstrophy",
            "initial.K0": "diagnostics.initial_energy",
            "asym_error.csv:u_exact": "exact_solver.eval_fields",
            "asym_error.csv:u_asym": "asymptotics.asymptotic_u",
        },
    }
    _emit(cfg.out_dir, "predictions.json", json_text(summary), written)
    return True


def _run_sweep(cfg, profile, written):
    scfg = cfg.solver_config()
    result = harness.sweep(profile, cfg.k_list, scfg)
    report = harness.compare_predictions(result.results, profile)
    ratio_by_k = {row["k"]: row for row in report.rows}

    rows = []
    for r in sorted(result.results, key=lambda r: r.k):
        ratios = ratio_by_k[r.k]
        bound_ratio = r.E_max_measured / diagnostics.integral_bound_rhs(r.E0)
        rows.append((r.k, r.E0, r.K0, r.T_star_measured, r.E_max_measured,
                     r.K_at_max, r.K_drop_measured, ratios["ratio_T_star"],
                     ratios["ratio_E_max"], ratios["ratio_K_drop"],
                     bound_ratio, r.n_evaluations))
    header = ("k", "E0", "K0", "T_star", "E_max", "K_at_max", "K_drop",
              "ratio_T_star", "ratio_E_max", "ratio_K_drop", "bound_ratio",
              "n_evaluations")
    _emit(cfg.out_dir, "sweep.csv", csv_text(header, rows), written)

    fits = {}
    for name in ("T_star", "E_max", "K_drop"):
        fit = result.fits[name]
        fits[name] = {
            "exponent": fit.exponent,
            "log_prefactor": fit.log_prefactor,
            "r_squared": fit.r_squared,
            "k_list": list(fit.k_list),
            "excluded": list(fit.excluded),
        }
    summary = {
        "config": cfg.echo(),
        "fits": fits,
        "extrapolated_ratios": dict(sorted(report.extrapolated.items())),
        "provenance": {
            "sweep.csv:k,E0,K0,T_star,E_max,K_at_max,K_drop,n_evaluations":
                "harness.find_enstrophy_max",
            "sweep.csv:ratio_T_star,ratio_E_max,ratio_K_drop":
                "harness.compare_predictions",
            "sweep.csv:bound_ratio": "diagnostics.integral_bound_rhs",
            "fits": "harness.sweep",
            "extrapolated_ratios": "harness.compare_predictions",
        },
    }
    _emit(cfg.out_dir, "fits.json", json_text(summary), written)
    return True


def _run_validate(cfg, profile, written):
    rep = profiles.validate_profile(profile)
    bound = asymptotics.check_required_bound(profile)

    # bifurcation structure at a representative post-pitchfork curvature
    apf = abs(profile.f_prime_at_zero)
    a = 0.5 * apf
    x0 = asymptotics.fold_location(profile, a)
    xs = np.linspace(0.0, x0, 257)[:-1]
    varphi = np.empty(len(xs))
    chi = np.empty(len(xs))
    for i, x in enumerate(xs):
        rs = asymptotics.find_roots(profile, float(x), a)
        varphi[i] = rs.varphi
        chi[i] = rs.chi
    mono_tol = 1e-12 * max(1.0, float(np.max(chi)))
    bif_checks = {
        "a": a,
        "x0": x0,
        "varphi_at_0": float(varphi[0]),
        "chi_at_0_minus_1": float(chi[0] - 1.0),
        "varphi_monotone": bool(np.all(np.diff(varphi) >= -1e-15)),
        "chi_monotone": bool(np.all(np.diff(chi) >= -mono_tol)),
    }
    bif_ok = (abs(bif_checks["varphi_at_0"]) <= 1e-12
              and abs(bif_checks["chi_at_0_minus_1"]) <= 1e-12
              and bif_checks["varphi_monotone"]
              and bif_checks["chi_monotone"])

    ok = rep.ok and bound.ok and bound.identity_residual < 1e-6 and bif_ok
    summary = {
        "config": cfg.echo(),
        "ok": bool(ok),
        "profile": {
            "ok": bool(rep.ok),
            "violations": list(rep.names),
            "oddness": rep.oddness,
            "endpoints": rep.endpoints,
            "sign_violation": rep.sign_violation,
            "convexity_violation": rep.convexity_violation,
            "fprime_zero_residual": rep.fprime_zero_residual,
            "antiderivative_residual": rep.antiderivative_residual,
            "F_evenness": rep.F_evenness,
        },
        "energy_drop_signs": {
            "ok": bool(bound.ok),
            "g_nonnegative": bound.g_nonnegative,
            "g_nondecreasing": bound.g_nondecreasing,
            "h_nonpositive": bound.h_nonpositive,
            "h_decreasing": bound.h_decreasing,
            "identity_residual": bound.identity_residual,
        },
        "bifurcation": dict(bif_checks, ok=bool(bif_ok)),
        "provenance": {
            "profile": "profiles.validate_profile",
            "energy_drop_signs": "asymptotics.check_required_bound",
            "bifurcation": "asymptotics.fold_location + "
                           "asymptotics.find_roots",
        },
    }
    _emit(cfg.out_dir, "validate.json", json_text(summary), written)
    if not ok:
        print("validate: FAIL (see validate.json)", file=sys.stderr)
    return ok


_RUNNERS = {"solve": _run_solve, "asym": _run_asym, "sweep": _run_sweep,
            "validate": _run_validate}


def run(cfg):
    """Execute one validated RunConfig; returns the process exit code."""
    try:
        profile = make_profile(cfg.profile_spec)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    os.makedirs(cfg.out_dir, exist_ok=True)
    written = []
    try:
        ok = _RUNNERS[cfg.mode](cfg, profile, written)
    except (QuadratureError, spectral_oracle.OracleError,
            profiles.ProfileError, FloatingPointError, ValueError,
            RuntimeError) as err:
        report = {
            "error": type(err).__name__,
            "message": str(err),
            "config": cfg.echo(),
            "written_before_failure": written,
        }
        with open(os.path.join(cfg.out_dir, "error.json"), "w",
                  newline="\n") as fh:
            fh.write(json_text(report))
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3
    return 0 if ok else 3


def main(argv=None):
    try:
        cfg = build_config(sys.argv[1:] if argv is None else list(argv))
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
