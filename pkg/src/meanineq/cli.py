"""Command-line experiment runner.

Every subcommand produces a report with the resolved configuration, result
rows and a list of assertions. Exit status is 0 when every assertion
passes, 1 when one fails and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from scipy import stats

from . import __version__
from . import dim2, integrals, perturbation, spectral
from .errors import MeanIneqError
from .linalg import DiagonalSpec, matrix_from_json, matrix_to_json, normalize_to_sl, orthogonality_residual
from .montecarlo import combined_se, default_threads
from .sampling import (
    InvariantMeasureSpec,
    SeededStream,
    draw_indexed,
    haar_batch,
    random_sl_matrices,
    random_traceless_directions,
)

SUBCOMMANDS = (
    "sphere-integral", "coset-integral", "spectral-average", "constant-estimate",
    "gershgorin-check", "perturbation-check", "x0-derivative", "dim2-exact",
    "dim2-counterexample", "genmu", "haar-selftest",
)

# subcommands that draw random numbers and therefore need an explicit seed
STOCHASTIC = {
    "sphere-integral", "coset-integral", "spectral-average", "constant-estimate",
    "perturbation-check", "genmu", "haar-selftest",
}

DEFAULT_SAMPLES = {
    "sphere-integral": 100_000, "coset-integral": 100_000, "spectral-average": 100_000,
    "constant-estimate": 100_000, "genmu": 10_000, "haar-selftest": 100_000,
}


class UsageError(MeanIneqError):
    def __init__(self, message, fields=None):
        super().__init__(message)
        self.fields = fields or {}


@dataclass
class ExperimentConfig:
    subcommand: str
    dim: int | None = None
    group: str = "O"
    field: str = "real"
    seed: int | None = None
    samples: int | None = None
    threads: int | None = None
    format: str = "json"
    out: str | None = None
    weights: list | None = None
    matrix: str | None = None
    diag: list | None = None
    d_vector: list | None = None
    t: list | None = None
    t_grid: str | None = None
    directions: int | None = None
    cases: int | None = None
    a: list | None = None
    gap_lo: float | None = None
    gap_hi: float | None = None
    beta: float | None = None
    measure: str | None = None
    matrices: int | None = None


@dataclass
class Report:
    config: ExperimentConfig
    rows: list = field(default_factory=list)
    summary: list = field(default_factory=list)
    timestamp: str = ""

    @property
    def passed(self) -> bool:
        return all(s["passed"] for s in self.summary)

    def to_dict(self) -> dict:
        return {"tool": "meanineq", "version": __version__, "config": asdict(self.config),
                "rows": self.rows, "summary": self.summary, "passed": self.passed,
                "timestamp": self.timestamp}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _build_parser():
    common = _Parser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--config", default=S, help="JSON file mirroring the flags")
    common.add_argument("--dim", type=int, default=S)
    common.add_argument("--group", choices=("O", "SO", "U"), default=S)
    common.add_argument("--field", choices=("real", "complex"), default=S)
    common.add_argument("--seed", type=int, default=S)
    common.add_argument("--samples", type=int, default=S)
    common.add_argument("--threads", type=int, default=S)
    common.add_argument("--format", choices=("json", "csv"), default=S)
    common.add_argument("--out", default=S)
    common.add_argument("--weights", type=_floats, default=S)
    common.add_argument("--matrix", default=S, help="JSON matrix literal or path to one")
    common.add_argument("--diag", type=_floats, default=S)
    common.add_argument("--d-vector", dest="d_vector", type=_floats, default=S)
    common.add_argument("--t", type=_floats, default=S)
    common.add_argument("--t-grid", dest="t_grid", default=S, help="lo:hi:steps[:log]")
    common.add_argument("--directions", type=int, default=S)
    common.add_argument("--cases", type=int, default=S)
    common.add_argument("--a", type=_floats, default=S)
    common.add_argument("--gap-lo", dest="gap_lo", type=float, default=S)
    common.add_argument("--gap-hi", dest="gap_hi", type=float, default=S)
    common.add_argument("--beta", type=float, default=S)
    common.add_argument("--measure", default=S, help="fixed:s1,...,sn or loguniform:L")
    common.add_argument("--matrices", type=int, default=S)

    parser = _Parser(prog="meanineq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def parse_t_grid(text: str) -> list:
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "lin")):
        raise UsageError(f"malformed --t-grid {text!r}", {"t_grid": "expected lo:hi:steps[:log]"})
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"malformed --t-grid {text!r}", {"t_grid": "non-numeric entry"})
    if steps < 1 or lo <= 0 and len(parts) == 4 and parts[3] == "log":
        raise UsageError("t-grid needs steps >= 1 and lo > 0 for log spacing", {"t_grid": text})
    if len(parts) == 4 and parts[3] == "log":
        return list(np.geomspace(lo, hi, steps))
    return list(np.linspace(lo, hi, steps))


def _validate(cfg: ExperimentConfig) -> ExperimentConfig:
    errors = {}
    if cfg.subcommand not in SUBCOMMANDS:
        errors["subcommand"] = f"unknown subcommand {cfg.subcommand!r}"
    if cfg.weights is not None:
        if not cfg.weights or any(not w > 0 for w in cfg.weights):
            errors["weights"] = "weights must be strictly positive"
        elif cfg.dim is None:
            cfg.dim = len(cfg.weights)
        elif cfg.dim != len(cfg.weights):
            errors["weights"] = "length differs from --dim"
    if cfg.d_vector is not None and cfg.dim is None:
        cfg.dim = len(cfg.d_vector)
    if cfg.diag is not None and cfg.dim is None:
        cfg.dim = len(cfg.diag)
    if cfg.dim is None:
        cfg.dim = 2 if cfg.subcommand in ("dim2-exact", "dim2-counterexample") else 3
    if cfg.dim < 1:
        errors["dim"] = "must be a positive integer"
    elif cfg.subcommand == "x0-derivative" and cfg.dim < 3:
        errors["dim"] = "x0-derivative needs dim >= 3"
    if cfg.group not in ("O", "SO", "U"):
        errors["group"] = "must be O, SO or U"
    if cfg.format not in ("json", "csv"):
        errors["format"] = "must be json or csv"
    if cfg.samples is None:
        cfg.samples = DEFAULT_SAMPLES.get(cfg.subcommand, 0)
    if cfg.subcommand in DEFAULT_SAMPLES and cfg.samples < 2:
        errors["samples"] = "must be at least 2"
    if cfg.threads is None:
        cfg.threads = default_threads()
    if cfg.threads < 1:
        errors["threads"] = "must be positive"
    if cfg.subcommand in STOCHASTIC and cfg.seed is None:
        errors["seed"] = "an explicit --seed is required for sampling subcommands"
    if cfg.seed is not None and not 0 <= cfg.seed < 2**64:
        errors["seed"] = "must be a 64-bit unsigned integer"
    for name in ("cases", "directions", "matrices"):
        v = getattr(cfg, name)
        if v is not None and v < 1:
            errors[name] = "must be positive"
    if cfg.subcommand == "sphere-integral" and cfg.weights is None:
        errors["weights"] = "sphere-integral needs --weights"
    if cfg.subcommand == "dim2-counterexample" and (cfg.gap_lo is None or cfg.gap_hi is None):
        errors["gap"] = "dim2-counterexample needs --gap-lo and --gap-hi"
    if cfg.t_grid is not None:
        try:
            parse_t_grid(cfg.t_grid)
        except UsageError as exc:
            errors.update(exc.fields)
    if errors:
        raise UsageError("invalid configuration: " + "; ".join(f"{k}: {v}" for k, v in errors.items()),
                         errors)
    return cfg


def parse_args(argv) -> ExperimentConfig:
    """Resolve flags over an optional JSON config file over defaults."""
    ns = vars(_build_parser().parse_args(list(argv)))
    values = {}
    if "config" in ns:
        try:
            values.update(json.loads(Path(ns.pop("config")).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file: {exc}", {"config": str(exc)})
    values.update({k.replace("-", "_"): v for k, v in ns.items()})
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown configuration keys: {sorted(unknown)}",
                         {k: "unknown" for k in unknown})
    return _validate(ExperimentConfig(**values))


def _check(name, passed, observed=None, threshold=None, margin=None):
    return {"name": name, "passed": bool(passed), "observed": _plain(observed),
            "threshold": _plain(threshold), "margin": _plain(margin)}


def _plain(x):
    """JSON-friendly copy of ``x`` (numpy scalars, complex numbers, arrays)."""
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _load_matrix(cfg):
    if cfg.matrix is not None:
        text = cfg.matrix
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        return matrix_from_json(text)
    if cfg.diag is not None:
        return np.diag(cfg.diag)
    if cfg.d_vector is not None:
        t = cfg.t[0] if cfg.t else 1.0
        return DiagonalSpec(tuple(cfg.d_vector), scale=t).matrix()
    return None


def _stream(cfg):
    return SeededStream(cfg.seed if cfg.seed is not None else 0)


def _run_sphere(cfg):
    a = integrals.WeightVector(tuple(cfg.weights))
    stream = _stream(cfg)
    est = integrals.sphere_log_integral(a, cfg.samples, stream, cfg.threads)
    ident = ",".join(repr(w) for w in a.weights)
    rows = [integrals.report_row("sphere_log_integral", a.dim, ident, est)]
    if a.dim in (2, 3):
        rows.append(integrals.report_row("sphere_log_integral", a.dim, ident,
                                         integrals.sphere_log_integral_quad(a), "quad", cfg.seed))
    checks = []
    if a.is_identity:
        checks.append(_check("equality case is exactly zero", est.mean == 0 and est.std_error == 0,
                             est.mean, 0.0))
    elif a.sl_normalized:
        cert = integrals.certify_sign(a, stream, start=cfg.samples,
                                      cap=max(cfg.samples, 10_000_000), threads=cfg.threads)
        checks.append(_check("integral is positive", cert.sign == "positive", cert.sign,
                             "positive", cert.estimate.mean - 5 * cert.estimate.std_error))
    return rows, checks


def _run_coset(cfg):
    stream = _stream(cfg)
    A = _load_matrix(cfg)
    if A is None:
        A = random_sl_matrices(cfg.dim, stream.child(9), 1)[0]
    ident = json.dumps(matrix_to_json(A)["rows"])
    two = integrals.coset_log_norm_integral(A, cfg.samples, stream, cfg.threads)
    red = integrals.reduced_coset_integral(A, cfg.samples, stream.child(2), cfg.threads)
    rows = [integrals.report_row("coset_log_norm_integral", A.shape[0], ident, two),
            integrals.report_row("reduced_coset_integral", A.shape[0], ident, red)]
    gap = abs(two.mean - red.mean)
    bound = 3 * combined_se(two, red)
    checks = [_check("two-level and reduced estimators agree", gap <= bound or gap == 0, gap, bound,
                     bound - gap)]
    return rows, checks


def _sl_or_normalize(A):
    if abs(np.linalg.det(A) - 1) > 1e-10:
        return normalize_to_sl(A), True
    return A, False


def _run_spectral(cfg):
    stream = _stream(cfg)
    A = _load_matrix(cfg)
    if A is None:
        A = random_sl_matrices(cfg.dim, stream.child(9), 1, cfg.field)[0]
    A, normalized = _sl_or_normalize(A)
    group = "U" if np.iscomplexobj(A) else cfg.group
    res = spectral.average_log_spectral_radius(A, group, cfg.samples, stream, cfg.threads)
    row = {"dim": A.shape[0], "group": group, "matrix": matrix_to_json(A), "normalized": normalized,
           "mean": res.estimate.mean, "std_error": res.estimate.std_error,
           "n_samples": res.estimate.n_samples, "log_sigma1": res.log_sigma1, "ratio": res.ratio,
           "min_integrand": res.min_integrand, "seed": res.estimate.seed}
    checks = [
        _check("integrand nonnegative", res.min_integrand >= -1e-10, res.min_integrand, -1e-10,
               res.min_integrand + 1e-10),
        _check("mean + 3 SE >= 0", res.estimate.mean + 3 * res.estimate.std_error >= 0,
               res.estimate.mean, 0.0, res.estimate.mean + 3 * res.estimate.std_error),
    ]
    return [row], checks


def _scales(cfg):
    if cfg.t_grid is not None:
        return parse_t_grid(cfg.t_grid)
    return cfg.t if cfg.t else [0.1, 0.3, 1.0, 2.0]


def _run_constant(cfg):
    stream = _stream(cfg)
    n = cfg.dim
    if cfg.d_vector is not None:
        dirs = [DiagonalSpec(tuple(cfg.d_vector), traceless=True, normalized=True)]
    else:
        dirs = random_traceless_directions(n, stream.child(100), cfg.directions or 20)
    scales = _scales(cfg)
    grid = spectral.DiagonalGrid(tuple(dirs), tuple(scales))
    est = spectral.estimate_dimensional_constant(n, grid, cfg.group, cfg.samples, stream,
                                                 cfg.threads)
    checks = [_check("integrand nonnegative on every grid point",
                     all(r["min_integrand"] >= -1e-10 for r in est.rows),
                     min(r["min_integrand"] for r in est.rows), -1e-10)]
    if n >= 3:
        checks.append(_check("positive constant floor", est.c_lower > 0, est.c_lower, 0.0,
                             est.c_lower))
    elif len(dirs) == 1:
        ordered = sorted(est.rows, key=lambda r: -r["t"])
        ok = all(
            (b["ratio"] is not None and a["ratio"] - b["ratio"]
             > 3 * math.hypot(a["std_error"] / a["log_sigma1"], b["std_error"] / b["log_sigma1"]))
            for a, b in zip(ordered, ordered[1:])
        )
        checks.append(_check("ratio strictly decreasing toward the identity", ok,
                             [r["ratio"] for r in ordered]))
    return [{"constant_estimate": est.to_dict()}] + est.rows, checks


def _run_gershgorin(cfg):
    A = _load_matrix(cfg)
    if A is not None:
        res = perturbation.check_eigenvalue_containment(A)
        return [res.to_dict()], [_check("all eigenvalues contained", res.contained)]
    stream = _stream(cfg)
    n, cases = cfg.dim, cfg.cases or 1000

    def draw(rng, m):
        G = rng.standard_normal((m, n, n))
        if cfg.field == "complex":
            G = G + 1j * rng.standard_normal((m, n, n))
        return G

    mats = draw_indexed(stream, cases, "sl", draw)
    failures = [k for k, M in enumerate(mats) if not perturbation.check_eigenvalue_containment(M)]
    row = {"dim": n, "field": cfg.field, "cases": cases, "failures": failures}
    return [row], [_check("all eigenvalues contained", not failures, len(failures), 0)]


def random_bracket_instance(n, rng):
    """Random ``(d, M, t)`` with positive nonincreasing ``d``, row sums of ``|M|`` at most 1."""
    d = np.sort(np.exp(rng.uniform(-2, 2, n)))[::-1]
    M = rng.uniform(-1, 1, (n, n))
    M /= np.maximum(np.sum(np.abs(M), axis=1, keepdims=True), 1.0)
    t = rng.uniform(0, 0.1 / (2 * n))
    return d, M, t


def _run_perturbation(cfg):
    stream = _stream(cfg)
    n, cases = cfg.dim, cfg.cases or 1000
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, n, 11]))
    violations, worst = 0, np.inf
    for _ in range(cases):
        b = perturbation.perturbed_radius_bounds(*random_bracket_instance(n, rng))
        violations += not b.holds
        worst = min(worst, b.actual - b.lower, b.upper - b.actual)
    fd_err = cons_err = imag = 0.0
    for d, T, pair in perturbation.random_simple_instances(n, stream, cases):
        chk = perturbation.derivative_check(d, T, pair)
        fd_err = max(fd_err, chk.fd_error)
        cons_err = max(cons_err, chk.consistency_error)
        imag = max(imag, chk.log_derivative_imag)
    row = {"dim": n, "cases": cases, "bracket_violations": violations, "min_bracket_slack": worst,
           "max_fd_error": fd_err, "max_kato_expvar_error": cons_err, "max_log_derivative_imag": imag}
    checks = [
        _check("radius bracket holds", violations == 0, violations, 0),
        _check("Kato derivative matches finite differences", fd_err <= 1e-6, fd_err, 1e-6),
        _check("exponential-family formula matches Kato", cons_err <= 1e-9, cons_err, 1e-9),
        _check("logarithmic derivative is real", imag <= 1e-12, imag, 1e-12),
    ]
    return [row], checks


def _run_x0(cfg):
    n = cfg.dim
    if cfg.d_vector is not None:
        specs = [DiagonalSpec(tuple(cfg.d_vector), traceless=True, normalized=True)]
    else:
        specs = random_traceless_directions(n, _stream(cfg), cfg.cases or 1000)
    rows, ok_floor, ok_exact = [], True, True
    for spec in specs:
        r = perturbation.local_derivative_inequality(n, spec)
        ok_floor &= r.holds
        ok_exact &= abs(r.derivative - r.exact) <= 1e-10
        rows.append({"dim": n, "d_vector": list(spec.exponents), "derivative": r.derivative,
                     "floor": r.floor, "exact": r.exact})
    return rows, [_check("derivative above floor", ok_floor),
                  _check("derivative matches exact value", ok_exact)]


def _run_dim2_exact(cfg):
    rows, checks = [], []
    for a in cfg.a or [1.1, 2.0, 5.0, 10.0]:
        q = dim2.exact_average_2d(a)
        c = dim2.closed_form_average_2d(a)
        rows.append({"a": a, "quadrature_so2": q, "closed_form": c,
                     "quadrature_o2": dim2.exact_average_o2(a)})
        checks.append(_check(f"quadrature matches closed form at a={a}", abs(q - c) <= 1e-8,
                             abs(q - c), 1e-8))
    quotients = [dim2.exact_average_2d(math.exp(h)) / h for h in (1e-1, 1e-2, 1e-3)]
    rows.append({"difference_quotients": quotients, "h": [1e-1, 1e-2, 1e-3]})
    checks.append(_check("critical point at the identity",
                         quotients[-1] < 1e-2 and quotients[0] > quotients[1] > quotients[2],
                         quotients[-1], 1e-2))
    return rows, checks


def _run_counterexample(cfg):
    ce = dim2.build_counterexample(cfg.gap_lo, cfg.gap_hi, cfg.beta)
    return [ce.to_dict()], [_check("rho = 1 off the gap", ce.certificate_max_deviation <= 1e-12,
                                   ce.certificate_max_deviation, 1e-12)]


def parse_measure(text: str, dim: int, field_: str) -> InvariantMeasureSpec:
    kind, _, arg = (text or "loguniform:1").partition(":")
    if kind == "fixed":
        spectrum = tuple(_floats(arg))
        return InvariantMeasureSpec(len(spectrum), "fixed", spectrum=spectrum, field=field_)
    if kind == "loguniform":
        return InvariantMeasureSpec(dim, "loguniform", half_width=float(arg or 1), field=field_)
    raise UsageError(f"unknown measure {text!r}", {"measure": text})


def _run_genmu(cfg):
    field_ = "complex" if cfg.group == "U" else "real"
    spec = parse_measure(cfg.measure, cfg.dim, field_)
    res = spectral.genmu_experiment(spec, cfg.group, cfg.matrices or 50, cfg.samples, _stream(cfg),
                                    threads=cfg.threads)
    checks = [_check("integrand nonnegative", res.min_integrand >= -1e-10, res.min_integrand, -1e-10)]
    if spec.dim >= 3 and res.rhs_mean > 0:
        margin = res.lhs.mean - 5 * res.lhs.std_error
        checks.append(_check("E log rho > 0 at 5 SE", margin > 0, res.lhs.mean, 0.0, margin))
    return [res.to_dict()], checks


def haar_selftest(n, group, samples, stream, threads_options=(1, 4)):
    """Orthogonality, first-moment, invariance (KS) and determinism checks."""
    X = haar_batch(n, stream.child(0), samples, group)
    G = np.einsum("mji,mjk->mik", X.conj(), X)
    resid = float(np.max(np.abs(G - np.eye(n))))
    x11 = np.abs(X[:, 0, 0]) ** 2
    m, se = float(np.mean(x11)), float(np.std(x11, ddof=1) / np.sqrt(samples))
    P = haar_batch(n, stream.child(2), 1, group)[0]
    Y = haar_batch(n, stream.child(1), samples, group)
    tr_px = np.trace(np.matmul(P, X), axis1=1, axis2=2).real
    tr_y = np.trace(Y, axis1=1, axis2=2).real
    ks = stats.ks_2samp(tr_px, tr_y)

    from .montecarlo import sample_values

    def integrand(offset, count):
        return haar_batch(n, stream.child(0).at(offset), count, group)[:, 0, 0].real

    runs = [sample_values(integrand, samples, th) for th in threads_options]
    deterministic = all(np.array_equal(runs[0], r) for r in runs[1:])
    row = {"dim": n, "group": group, "samples": samples, "orthogonality_residual": resid,
           "mean_x11_sq": m, "std_error": se, "expected": 1 / n, "ks_statistic": float(ks.statistic),
           "ks_pvalue": float(ks.pvalue), "deterministic_across_threads": deterministic,
           "seed": stream.seed}
    checks = [
        _check("orthogonality residual < 1e-12", resid < 1e-12, resid, 1e-12),
        _check("E|X11|^2 = 1/n within 3 SE", abs(m - 1 / n) <= 3 * se, abs(m - 1 / n), 3 * se),
        _check("KS invariance at alpha = 0.01", ks.pvalue > 0.01, float(ks.pvalue), 0.01),
        _check("bitwise determinism across thread counts", deterministic),
    ]
    return row, checks


def _run_haar(cfg):
    row, checks = haar_selftest(cfg.dim, cfg.group, cfg.samples, _stream(cfg))
    return [row], checks


HANDLERS = {
    "sphere-integral": _run_sphere,
    "coset-integral": _run_coset,
    "spectral-average": _run_spectral,
    "constant-estimate": _run_constant,
    "gershgorin-check": _run_gershgorin,
    "perturbation-check": _run_perturbation,
    "x0-derivative": _run_x0,
    "dim2-exact": _run_dim2_exact,
    "dim2-counterexample": _run_counterexample,
    "genmu": _run_genmu,
    "haar-selftest": _run_haar,
}


def run(config: ExperimentConfig) -> Report:
    rows, checks = HANDLERS[config.subcommand](config)
    return Report(config, _plain(rows), checks, datetime.now(timezone.utc).isoformat())


def to_csv(report: Report) -> str:
    """Long format: one line per (row, statistic)."""
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["subcommand", "row", "statistic", "value"])
    for i, row in enumerate(report.rows):
        for key, value in row.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value)
            w.writerow([report.config.subcommand, i, key, value])
    for check in report.summary:
        w.writerow([report.config.subcommand, "summary", check["name"], check["passed"]])
    return buf.getvalue()


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"meanineq: {exc}", file=sys.stderr)
        print(json.dumps({"error": "usage", "message": str(exc), "fields": exc.fields}))
        return 2
    try:
        report = run(cfg)
    except MeanIneqError as exc:
        print(f"meanineq: {exc}", file=sys.stderr)
        doc = {"error": type(exc).__name__, "message": str(exc), "config": asdict(cfg)}
        _emit(json.dumps(doc) + "\n", cfg.out)
        return 2
    text = to_csv(report) if cfg.format == "csv" else json.dumps(report.to_dict(), indent=2) + "\n"
    _emit(text, cfg.out)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
