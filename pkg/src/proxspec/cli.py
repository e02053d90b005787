"""Command-line front end: single evaluations, sweeps, validation, caching.

Commands map one-to-one onto the library layer (`constants`, `theta`,
`mu1`, `alpha`, `hc3`, `degennes`, `refined-check`), plus `sweep` for
parameter ranges, and `validate` for the built-in invariant suites.

Output is JSON (default) or CSV.  Both carry a header block recording the
solver version and the tolerances in force; in CSV it rides in leading
``#`` comment lines above the RFC-4180 header row.  Floats are written in
shortest round-trip form, so a CSV table converts back to the JSON data
section losslessly.

Results can be cached in a content-addressed store (``--cache-dir`` or
``$PROXSPEC_CACHE_DIR``): the key hashes the operation, its parameters,
the tolerances, and the solver version, so any change to one of those
invalidates the entry.  Writers use atomic rename; corrupt entries are
treated as misses with a warning.  Errors leave a machine-readable JSON
record on stderr and a nonzero exit status.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import SOLVER_VERSION, __version__
from . import fields, geometry, halfline, interface, refined

_GRID_NOTES = {
    "elements": "P1 on uniform grids, 3-point Gauss per element",
    "mass": "lumped (row-sum), inverse-sqrt similarity",
    "eigensolve": "Sturm bisection + inverse iteration, Richardson in h",
}


@dataclass(frozen=True)
class RunConfig:
    """Normalized invocation: command, parameters, output and cache policy."""

    command: str
    parameters: dict
    output_format: str = "json"
    output_path: str | None = None
    cache_dir: str | None = None
    tolerances: dict = field(default_factory=dict)
    jobs: int = 1


@dataclass(frozen=True)
class CacheEntry:
    key: str
    value: object
    created: float


# --------------------------------------------------------------------------
# cache


def cache_key(operation: str, parameters: dict, tolerances: dict) -> str:
    blob = json.dumps(
        {
            "operation": operation,
            "parameters": parameters,
            "tolerances": tolerances,
            "solver_version": SOLVER_VERSION,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def cache_get(cache_dir: str, key: str):
    """Stored value for `key`, or None; corrupt entries count as misses."""
    path = os.path.join(cache_dir, key + ".json")
    if not os.path.exists(path):
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            entry = json.load(fh)
        if entry["key"] != key:
            raise ValueError("key mismatch")
        return entry["value"]
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(
            json.dumps({"warning": "corrupt cache entry ignored", "path": path, "detail": str(exc)}),
            file=sys.stderr,
        )
        return None


def cache_put(cache_dir: str, key: str, value) -> None:
    os.makedirs(cache_dir, exist_ok=True)
    entry = CacheEntry(key, value, time.time())
    # key order of `value` is preserved so CSV column order survives a round
    # trip through the cache (determinism across hit/miss)
    payload = json.dumps({"key": entry.key, "created": entry.created, "value": entry.value})
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, os.path.join(cache_dir, key + ".json"))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cached(config: RunConfig, operation: str, parameters: dict, compute):
    if not config.cache_dir:
        return compute()
    key = cache_key(operation, parameters, config.tolerances)
    hit = cache_get(config.cache_dir, key)
    if hit is not None:
        return hit
    value = compute()
    cache_put(config.cache_dir, key, value)
    return value


# --------------------------------------------------------------------------
# serialization


def _render_json(meta: dict, data) -> str:
    return json.dumps({"meta": meta, "data": data}, sort_keys=True, indent=2) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(float(v))  # float() strips numpy scalar wrappers
    return str(v)


def _render_csv(meta: dict, data) -> str:
    rows = data if isinstance(data, list) else [data]
    buf = io.StringIO()
    for k in sorted(meta):
        if isinstance(meta[k], dict):
            for k2 in sorted(meta[k]):
                buf.write(f"# {k}.{k2} = {meta[k][k2]}\r\n")
        else:
            buf.write(f"# {k} = {meta[k]}\r\n")
    if rows:
        writer = csv.writer(buf, lineterminator="\r\n")
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(row[k]) for k in header])
    return buf.getvalue()


def parse_csv_text(text: str) -> list[dict]:
    """Data rows of an emitted CSV, numerics restored (round-trip helper)."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        return []
    out = []
    for rec in reader:
        row = {}
        for k, cell in zip(header, rec):
            try:
                row[k] = int(cell)
            except ValueError:
                try:
                    row[k] = float(cell)
                except ValueError:
                    row[k] = None if cell == "" else cell
        out.append(row)
    return out


def _emit(config: RunConfig, data) -> None:
    meta = {
        "command": config.command,
        "package_version": __version__,
        "solver_version": SOLVER_VERSION,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "tolerances": dict(sorted(config.tolerances.items())),
        "grid": _GRID_NOTES,
    }
    text = (
        _render_json(meta, data)
        if config.output_format == "json"
        else _render_csv(meta, data)
    )
    if config.output_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# range syntax


def parse_values(spec: str) -> list[float]:
    """`lo:hi:log|lin:n`, a comma list, or a single number."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 4 or parts[2] not in ("log", "lin"):
            raise ValueError(f"bad range {spec!r}; expected lo:hi:log|lin:n")
        lo, hi, kind, n = float(parts[0]), float(parts[1]), parts[2], int(parts[3])
        if n < 1:
            raise ValueError("range needs n >= 1")
        if kind == "log":
            if lo <= 0.0 or hi <= 0.0:
                raise ValueError("log range needs positive endpoints")
            return [float(v) for v in np.geomspace(lo, hi, n)]
        return [float(v) for v in np.linspace(lo, hi, n)]
    if "," in spec:
        return [float(tok) for tok in spec.split(",") if tok]
    return [float(spec)]


def read_curve_csv(path: str) -> geometry.ClosedCurve:
    """Two-column x,y sample file, optional header row, '#' comments."""
    pts = []
    first_data_row = True
    with open(path, encoding="utf-8", newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].lstrip().startswith("#"):
                continue
            try:
                pts.append((float(rec[0]), float(rec[1])))
            except (ValueError, IndexError):
                if first_data_row:
                    first_data_row = False
                    continue  # header row
                raise ValueError(f"malformed curve row {rec!r}")
            first_data_row = False
    return geometry.ClosedCurve(np.asarray(pts))


# --------------------------------------------------------------------------
# command handlers (each returns the JSON-ready data section)


def _do_constants(config: RunConfig):
    tol = config.tolerances["tol"]

    def compute():
        uc = halfline.universal_constants(tol)
        return {"theta0": uc.theta0, "xi0": uc.xi0, "c1": uc.c1}

    return _cached(config, "constants", {}, compute)


def _do_theta(config: RunConfig, gamma: float):
    def compute():
        r = halfline.theta_of(
            gamma,
            config.tolerances.get("eig_tol", 1e-8),
            config.tolerances.get("min_tol", 1e-6),
        )
        return {
            "gamma": r.gamma,
            "theta": r.theta,
            "xi_star": r.xi_star,
            "trace_sq": r.trace_sq,
            "residual": r.residual,
        }

    return _cached(config, "theta", {"gamma": gamma}, compute)


def _do_mu1(config: RunConfig, a: float, m: float, alpha: float, xi: float):
    def compute():
        g = interface.mu1(
            interface.TransmissionParams(a, m, alpha, xi),
            config.tolerances.get("tol", 1e-8),
        )
        return {
            "a": a,
            "m": m,
            "alpha": alpha,
            "xi": xi,
            "mu1": g.mu1,
            "gamma_eff": g.gamma_eff,
            "trace_mismatch": g.trace_mismatch,
            "sandwich_low": g.sandwich_low,
            "sandwich_high": g.sandwich_high,
        }

    return _cached(config, "mu1", {"a": a, "m": m, "alpha": alpha, "xi": xi}, compute)


def _do_alpha(config: RunConfig, a: float, m: float):
    def compute():
        r = fields.alpha_of(a, m, config.tolerances.get("tol", 1e-7))
        return {
            "a": r.a,
            "m": r.m,
            "alpha": r.alpha,
            "branch": r.branch,
            "residual": r.residual,
            "xi_star": r.xi_star,
        }

    return _cached(config, "alpha", {"a": a, "m": m}, compute)


def _report_dict(rep: fields.CriticalFieldReport) -> dict:
    return {
        "kappa": rep.kappa,
        "hc3_leading": rep.hc3_leading,
        "hc3_two_term": rep.hc3_two_term,
        "coeff_c1": rep.coeff_c1,
        "kappa_r_max": rep.kappa_r_max,
        "regime": rep.regime,
    }


def _do_hc3(config: RunConfig, a, m, kappa, kappa_r_max, curve):
    if curve is not None:
        if kappa_r_max is not None:
            raise ValueError("give either --curve or --kappa-r-max, not both")
        kappa_r_max = curvature_from_csv(curve)

    params = {"a": a, "m": m, "kappa": kappa, "kappa_r_max": kappa_r_max}

    def compute():
        if kappa_r_max is None:
            return _report_dict(fields.hc3_leading(a, m, kappa))
        return _report_dict(fields.hc3_two_term(a, m, kappa, kappa_r_max))

    return _cached(config, "hc3", params, compute)


def curvature_from_csv(path: str) -> float:
    return geometry.curvature_profile(read_curve_csv(path)).kappa_r_max


def _do_degennes(config: RunConfig, delta, gamma0, kappa):
    params = {"delta": delta, "gamma0": gamma0, "kappa": kappa}

    def compute():
        return _report_dict(fields.hc3_degennes(delta, gamma0, kappa))

    return _cached(config, "degennes", params, compute)


def _do_refined(config: RunConfig, a, m, beta, h_list, delta):
    params = {"a": a, "m": m, "beta": beta, "h_list": h_list, "delta": delta}

    def compute():
        sw = refined.expansion_check(a, m, beta, h_list, delta=delta)
        rows = []
        for tag, recs in (("winner", sw.checks), ("rejected", sw.rejected)):
            for c in recs:
                rows.append(
                    {
                        "candidate": tag,
                        "trace_sign": sw.trace_sign,
                        "residual_order": sw.residual_order,
                        "alpha_hat": sw.alpha_hat,
                        "eta_hat": sw.eta_hat,
                        "h": c.h,
                        "mu1_computed": c.mu1_computed,
                        "d0": c.d0,
                        "d2": c.d2,
                        "d3": c.d3,
                        "residual": c.residual,
                    }
                )
        return rows

    return _cached(config, "refined-check", params, compute)


# --------------------------------------------------------------------------
# sweep

_SWEEP_VARS = {
    "alpha": ("a", "m"),
    "theta": ("gamma",),
    "mu1": ("a", "m", "alpha", "xi"),
}

_SWEEP_HANDLERS = {
    "alpha": lambda config, pt: _do_alpha(config, pt["a"], pt["m"]),
    "theta": lambda config, pt: _do_theta(config, pt["gamma"]),
    "mu1": lambda config, pt: _do_mu1(config, pt["a"], pt["m"], pt["alpha"], pt["xi"]),
}


def _do_sweep(config: RunConfig, quantity: str, raw_params: dict):
    names = _SWEEP_VARS[quantity]
    missing = [k for k in names if raw_params.get(k) is None]
    if missing:
        raise ValueError(f"sweep {quantity} needs --{' --'.join(missing)}")
    grids = {k: parse_values(raw_params[k]) for k in names}
    ranged = [k for k, v in grids.items() if len(v) > 1]
    if len(ranged) > 1:
        raise ValueError(f"only one parameter may range; got {ranged}")
    var = ranged[0] if ranged else names[0]
    points = [
        {**{k: v[0] for k, v in grids.items() if k != var}, var: val}
        for val in grids[var]
    ]
    handler = _SWEEP_HANDLERS[quantity]
    with ThreadPoolExecutor(max_workers=max(1, config.jobs)) as ex:
        rows = list(ex.map(lambda pt: handler(config, pt), points))
    return rows


# --------------------------------------------------------------------------
# validate

_FIXTURE = (1.0, 4.0, 0.8, 0.7)  # (a, m, alpha, xi) used by the quick suites


def _suite_eigen1d():
    from .eigen1d import WeightedForm, make_grid, _bisect_smallest, _solve_value

    form = WeightedForm(p=None, q=lambda t: (t - 0.76) ** 2, robin_left=0.0)
    lams = [
        _solve_value(form, make_grid(0.0, 12.0, n), 1, 1e-13)
        for n in (512, 1024, 2048, 4096)
    ]
    diffs = [abs(x - y) for x, y in zip(lams, lams[1:])]
    ratios = [d1 / d2 for d1, d2 in zip(diffs, diffs[1:])]
    ok = all(3.2 <= r <= 4.8 for r in ratios)
    yield "second-order-convergence", ok, f"ratios {[f'{r:.2f}' for r in ratios]}"

    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(25):
        d = rng.normal(size=7)
        e = rng.normal(size=6)
        dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        ref = float(np.linalg.eigvalsh(dense)[0])
        got = float(_bisect_smallest(d, e * e, 1, 1e-14, 1e-13)[0])
        worst = max(worst, abs(got - ref))
    yield "sturm-vs-dense", worst < 1e-12, f"worst |diff| {worst:.2e}"


def _suite_halfline():
    th = halfline.theta_of(1.0)
    res = abs(th.xi_star**2 - th.theta - 1.0)
    yield "minimizer-identity", res < 1e-5, f"|xi*^2 - Theta - gamma^2| = {res:.2e}"

    d = 1e-4
    fd = (halfline.theta_of(0.5 + d).theta - halfline.theta_of(0.5 - d).theta) / (2 * d)
    tr = halfline.theta_of(0.5).trace_sq
    rel = abs(fd - tr) / tr
    yield "derivative-vs-trace", rel < 1e-3, f"rel err {rel:.2e}"

    xi = 0.76
    gap = halfline.lambda_neumann(2, xi) - halfline.lambda_dirichlet(1, xi)
    yield "neumann-dirichlet-order", gap > 1e-6, f"lambda2^N - lambda1^D = {gap:.4f}"


def _suite_interface():
    a, m, alpha, xi = _FIXTURE
    g8 = interface.mu1(interface.TransmissionParams(a, m, alpha, 8.0))
    gm8 = interface.mu1(interface.TransmissionParams(a, m, alpha, -8.0))
    e1 = abs(g8.mu1 - (1.0 - alpha))
    e2 = abs(gm8.mu1 - (1.0 / m + a * alpha))
    yield "transmission-limits", e1 < 2e-2 and e2 < 2e-2, f"errors {e1:.2e}, {e2:.2e}"

    g = interface.mu1(interface.TransmissionParams(a, m, alpha, xi))
    ok = g.sandwich_low - 1e-9 <= g.mu1 <= g.sandwich_high + 1e-9
    yield "decoupling-sandwich", ok, (
        f"{g.sandwich_low:.6f} <= {g.mu1:.6f} <= {g.sandwich_high:.6f}"
    )

    d = 1e-4
    fd = (
        interface.mu1(interface.TransmissionParams(a, m, alpha, xi + d)).mu1
        - interface.mu1(interface.TransmissionParams(a, m, alpha, xi - d)).mu1
    ) / (2 * d)
    cf = interface.dmu_dxi(interface.TransmissionParams(a, m, alpha, xi))
    rel = abs(fd - cf) / max(abs(fd), 1e-12)
    yield "dxi-closed-form", rel < 1e-3, f"rel err {rel:.2e}"


def _suite_refined():
    a, m, alpha, xi = _FIXTURE
    p0 = refined.RefinedParams(
        interface.TransmissionParams(a, m, alpha, xi), 1e-12, 0.0
    )
    flat = interface.mu1(interface.TransmissionParams(a, m, alpha, xi)).mu1
    v = refined.mu1_refined(p0, xi)
    yield "flat-reduction", abs(v - flat) < 1e-6, f"|diff| = {abs(v - flat):.2e}"

    try:
        refined.RefinedParams(interface.TransmissionParams(a, m, alpha, xi), 1.0, 2.0)
        ok = False
    except ValueError:
        ok = True
    yield "weight-guard", ok, "beta*h^delta >= 1 rejected"


def _suite_geometry():
    t = np.linspace(0.0, 2.0 * np.pi, 256, endpoint=False)
    circ = geometry.ClosedCurve(np.column_stack([2 * np.cos(t), 2 * np.sin(t)]))
    prof = geometry.curvature_profile(circ)
    err = float(np.max(np.abs(prof.kappa_r - 0.5)))
    yield "circle-curvature", err < 1e-4, f"max |kappa - 1/R| = {err:.2e}"

    turn = prof.turning_integral()
    rel = abs(turn - 2.0 * math.pi) / (2.0 * math.pi)
    yield "turning-number", rel < 0.01, f"integral {turn:.6f}"


def _suite_cli():
    with tempfile.TemporaryDirectory() as tmp:
        key = cache_key("probe", {"x": 1.0}, {"tol": 1e-8})
        cache_put(tmp, key, {"v": 1.2345678901234567})
        back = cache_get(tmp, key)
        yield "cache-roundtrip", back == {"v": 1.2345678901234567}, "put/get identical"
        other = cache_key("probe", {"x": 1.0}, {"tol": 1e-9})
        yield "cache-tolerance-key", other != key, "tolerance enters the key"

    data = [{"x": 0.1, "y": 1.0 / 3.0}, {"x": 2.0, "y": float(np.pi)}]
    text = _render_csv({"solver_version": SOLVER_VERSION}, data)
    yield "csv-json-roundtrip", parse_csv_text(text) == data, "17-digit float fidelity"


_SUITES = {
    "eigen1d": _suite_eigen1d,
    "halfline": _suite_halfline,
    "interface": _suite_interface,
    "refined": _suite_refined,
    "geometry": _suite_geometry,
    "cli": _suite_cli,
}


def _do_validate(config: RunConfig, suite: str):
    names = list(_SUITES) if suite == "all" else [suite]
    rows = []
    for name in names:
        for check, ok, detail in _SUITES[name]():
            rows.append(
                {
                    "suite": name,
                    "check": check,
                    "status": "pass" if ok else "FAIL",
                    "detail": detail,
                }
            )
    return rows


# --------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="proxspec",
        description="Spectral quantities of the proximity-effect interface model.",
    )
    ap.add_argument("--version", action="version", version=f"proxspec {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None, metavar="PATH")
        p.add_argument(
            "--cache-dir",
            default=os.environ.get("PROXSPEC_CACHE_DIR"),
            metavar="DIR",
        )

    p = sub.add_parser("constants", help="universal constants theta0, xi0, c1")
    p.add_argument("--tol", type=float, default=1e-8)
    common(p)

    p = sub.add_parser("theta", help="Robin ground energy minimized over frequency")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--eig-tol", type=float, default=1e-8)
    p.add_argument("--min-tol", type=float, default=1e-6)
    common(p)

    p = sub.add_parser("mu1", help="transmission ground energy at fixed frequency")
    for name in ("--a", "--m", "--alpha", "--xi"):
        p.add_argument(name, type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    common(p)

    p = sub.add_parser("alpha", help="critical spectral parameter alpha(a, m)")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-7)
    common(p)

    p = sub.add_parser("hc3", help="onset field, leading or curvature-corrected")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--kappa-r-max", type=float, default=None)
    p.add_argument("--curve", default=None, metavar="CSV")
    common(p)

    p = sub.add_parser("degennes", help="onset-field scaling for a Robin boundary")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--gamma0", type=float, required=True)
    p.add_argument("--kappa", type=float, required=True)
    common(p)

    p = sub.add_parser("refined-check", help="two-term expansion / trace-sign sweep")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--h-list", default="1e-2,1e-3,1e-4")
    p.add_argument("--delta", type=float, default=refined.DELTA_DEFAULT)
    common(p)

    p = sub.add_parser("validate", help="run built-in invariant suites")
    p.add_argument("--suite", choices=("all", *_SUITES), default="all")
    common(p)

    p = sub.add_parser("sweep", help="evaluate a quantity over a parameter range")
    p.add_argument("quantity", choices=tuple(_SWEEP_VARS))
    p.add_argument("--a")
    p.add_argument("--m")
    p.add_argument("--alpha")
    p.add_argument("--xi")
    p.add_argument("--gamma")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--jobs", type=int, default=1)
    common(p)

    return ap


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    tolerances = {}
    for k in ("tol", "eig_tol", "min_tol"):
        v = getattr(args, k, None)
        if v is not None:
            tolerances[k] = v
    if args.command == "sweep" and "tol" not in tolerances:
        tolerances["tol"] = 1e-7 if args.quantity == "alpha" else 1e-8
    params = {
        k: v
        for k, v in vars(args).items()
        if k
        not in (
            "command",
            "format",
            "output",
            "cache_dir",
            "jobs",
            "tol",
            "eig_tol",
            "min_tol",
        )
        and v is not None
    }
    return RunConfig(
        command=args.command,
        parameters=params,
        output_format=args.format,
        output_path=args.output,
        cache_dir=args.cache_dir,
        tolerances=tolerances,
        jobs=getattr(args, "jobs", 1),
    )


def run(config: RunConfig) -> int:
    """Dispatch one parsed invocation; returns the process exit status."""
    try:
        cmd, prm = config.command, config.parameters
        if cmd == "constants":
            data = _do_constants(config)
        elif cmd == "theta":
            data = _do_theta(config, prm["gamma"])
        elif cmd == "mu1":
            data = _do_mu1(config, prm["a"], prm["m"], prm["alpha"], prm["xi"])
        elif cmd == "alpha":
            data = _do_alpha(config, prm["a"], prm["m"])
        elif cmd == "hc3":
            data = _do_hc3(
                config,
                prm["a"],
                prm["m"],
                prm["kappa"],
                prm.get("kappa_r_max"),
                prm.get("curve"),
            )
        elif cmd == "degennes":
            data = _do_degennes(config, prm["delta"], prm["gamma0"], prm["kappa"])
        elif cmd == "refined-check":
            h_list = parse_values(prm["h_list"])
            data = _do_refined(config, prm["a"], prm["m"], prm["beta"], h_list, prm["delta"])
        elif cmd == "validate":
            data = _do_validate(config, prm["suite"])
        elif cmd == "sweep":
            data = _do_sweep(config, prm["quantity"], prm)
        else:  # pragma: no cover - argparse enforces the choices
            raise ValueError(f"unknown command {cmd!r}")
    except Exception as exc:  # noqa: BLE001 - boundary: translate to error record
        print(
            json.dumps(
                {
                    "error": type(exc).__name__,
                    "message": str(exc),
                    "command": config.command,
                }
            ),
            file=sys.stderr,
        )
        return 1

    _emit(config, data)
    if config.command == "validate" and any(r["status"] != "pass" for r in data):
        return 1
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return run(_config_from_args(args))


if __name__ == "__main__":
    raise SystemExit(main())
