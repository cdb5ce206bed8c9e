"""Command-line interface: scans, kernel tables, bounds, fits, verification.

Output contract: bulk numeric data goes to CSV (comma-delimited, stable row
order, a ``#``-prefixed header block embedding the config hash, tool
version, and seed), summaries go to JSON with the same provenance keys, and
report-producing commands render a matplotlib figure next to the CSV.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.  The cache directory honors the SUPNORM_CACHE_DIR environment
variable; ``--cache-dir`` overrides it.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .bounds import (BoundConfig, growth_fit, proposition41_bound,
                     supnorm_scan)
from .geometry import UpperHalfPoint
from .heat_kernel import HeatParams, heat_kernel_point_log
from .modular_forms import bergman_kernel_diag, orthonormal_basis
from .orbits import enumerate_orbit
from .quadrature import QuadratureConfig, QuadratureError
from .verification import DEFAULT_SEED, run_suites

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Serializable run configuration; its hash is embedded in every output."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    rho_cap: float = 25.0
    grid_nx: int = 200
    grid_ny: int = 200
    cache_dir: str = ""
    seed: int = DEFAULT_SEED
    threads: int = 1

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    @property
    def hash(self) -> str:
        payload = json.dumps(self.as_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    @property
    def quad(self) -> QuadratureConfig:
        return QuadratureConfig(rel_tol=self.rel_tol, abs_tol=self.abs_tol)


def _load_config(args) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, val = line.partition("=")
                values[key.strip()] = val.strip()
    typed = {}
    fields = {f.name: f.type for f in dataclasses.fields(RunConfig)}
    for key, val in values.items():
        if key not in fields:
            raise ValueError(f"unknown config key {key!r}")
        kind = fields[key]
        typed[key] = (int(val) if kind == "int"
                      else float(val) if kind == "float" else val)
    # flag overrides win over the config file
    for key in ("seed", "threads", "cache_dir"):
        flag = getattr(args, key, None)
        if flag not in (None, ""):
            typed[key] = flag
    cfg = RunConfig(**typed)
    if cfg.cache_dir:
        os.environ["SUPNORM_CACHE_DIR"] = cfg.cache_dir
    return cfg


def _provenance(cfg: RunConfig) -> dict:
    return {"config_hash": cfg.hash, "version": __version__,
            "seed": cfg.seed}


def _write_csv(path: str, header_cols: list[str], rows, cfg: RunConfig) -> None:
    with open(path, "w") as fh:
        for key, val in _provenance(cfg).items():
            fh.write(f"# {key}={val}\n")
        fh.write(",".join(header_cols) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.12g}" if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def _write_json(path: str, payload: dict, cfg: RunConfig) -> None:
    payload = dict(payload)
    payload.update(_provenance(cfg))
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_z(text: str) -> UpperHalfPoint:
    try:
        x_str, y_str = text.split(",")
        return UpperHalfPoint(float(x_str), float(y_str))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"--z expects 'x,y' with y > 0, got {text!r}") from exc


def _parse_grid(text: str) -> tuple[int, int]:
    nx_str, ny_str = text.split(",")
    return int(nx_str), int(ny_str)


def _parse_range(text: str) -> np.ndarray:
    """'a:b:c' -> inclusive grid from a to b with step c."""
    a, b, c = (float(p) for p in text.split(":"))
    if c <= 0 or b < a:
        raise ValueError(f"bad range {text!r}")
    n = int(round((b - a) / c))
    return a + c * np.arange(0, n + 1)


def _even_weight(value: str) -> int:
    w = int(value)
    if w % 2 or w < 4:
        raise argparse.ArgumentTypeError(f"weight must be even and >= 4, "
                                         f"got {value}")
    return w


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_scan(args, cfg: RunConfig) -> int:
    if args.weight < 12:
        raise ValueError("weight below 12 has no cusp forms to scan")
    basis = orthonormal_basis(args.weight, cfg.quad)
    grid = _parse_grid(args.grid) if args.grid else (cfg.grid_nx, cfg.grid_ny)
    result = supnorm_scan(args.weight, basis, region=args.region, grid=grid,
                          y_max=args.ymax, y_min=args.ymin)
    rows = []
    for i, x in enumerate(result.xs):
        for j, y in enumerate(result.ys):
            v = result.values[i, j]
            rows.append((float(x), float(y),
                         float(v) if math.isfinite(v) else 0.0))
    out = args.out or f"scan_w{args.weight}_{args.region}.csv"
    _write_csv(out, ["x", "y", "S_k"], rows, cfg)
    summary = {
        "weight": args.weight, "region": result.region,
        "grid_spec": result.grid_spec, "sup_value": result.sup_value,
        "argmax_x": result.argmax.x, "argmax_y": result.argmax.y,
    }
    _write_json(_sibling(out, ".json"), summary, cfg)
    from .plotting import plot_scan_heatmap
    plot_scan_heatmap(result, _sibling(out, ".png"))
    print(f"scan: sup={result.sup_value:.6g} at "
          f"({result.argmax.x:.4f}, {result.argmax.y:.4f}) -> {out}")
    return EXIT_OK


def _sibling(path: str, ext: str) -> str:
    root, _ = os.path.splitext(path)
    return root + ext


def cmd_heat(args, cfg: RunConfig) -> int:
    k = args.weight // 2
    p = HeatParams(k, args.t)
    rhos = _parse_range(args.rho_grid)
    logs = [heat_kernel_point_log(p, float(r), cfg.quad) for r in rhos]
    rows = [(float(r), lv, math.exp(lv) if lv < 700 else math.inf)
            for r, lv in zip(rhos, logs)]
    out = args.out or f"heat_w{args.weight}_t{args.t}.csv"
    _write_csv(out, ["rho", "log_K", "K"], rows, cfg)
    from .plotting import plot_heat_curves
    plot_heat_curves(rhos, {f"k={k}, t={args.t}": logs}, _sibling(out, ".png"))
    print(f"heat: {len(rows)} rows -> {out}")
    return EXIT_OK


def cmd_orbit(args, cfg: RunConfig) -> int:
    z = _parse_z(args.z)
    entries = enumerate_orbit(z, args.rho_max, strategy=args.strategy)
    rows = [(e.element.a, e.element.b, e.element.c, e.element.d,
             e.rho, e.phase.real, e.phase.imag) for e in entries]
    out = args.out or "orbit.csv"
    _write_csv(out, ["a", "b", "c", "d", "rho", "phase_re", "phase_im"],
               rows, cfg)
    print(f"orbit: {len(rows)} elements within rho={args.rho_max} -> {out}")
    return EXIT_OK


def cmd_bound(args, cfg: RunConfig) -> int:
    bc = BoundConfig.create(args.delta, args.rho_max)
    basis = orthonormal_basis(args.weight, cfg.quad)
    grid = _parse_grid(args.grid) if args.grid else (20, 20)
    xs = np.linspace(-0.5, 0.5, grid[0])
    ys = np.geomspace(math.sqrt(3.0) / 2.0, args.ymax, grid[1])
    rows = []
    for x in xs:
        for y in ys:
            if x * x + y * y < 1.0:
                continue
            z = UpperHalfPoint(float(x), float(y))
            s = bergman_kernel_diag(args.weight, z, basis)
            tv = proposition41_bound(args.weight, z, bc)
            rows.append((float(x), float(y), s, tv.value, tv.tail_bound))
    out = args.out or f"bound_w{args.weight}.csv"
    _write_csv(out, ["x", "y", "S_k", "prop_bound", "tail"], rows, cfg)
    violations = sum(1 for _, _, s, v, tb in rows if s > v - tb)
    _write_json(_sibling(out, ".json"),
                {"weight": args.weight, "delta": args.delta,
                 "c_delta": bc.c_delta, "points": len(rows),
                 "violations": violations}, cfg)
    print(f"bound: {len(rows)} points, {violations} violations -> {out}")
    return EXIT_OK


def cmd_fit(args, cfg: RunConfig) -> int:
    points = []
    with open(args.infile) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line[0].isalpha():
                continue
            k_str, v_str = line.split(",")[:2]
            points.append((float(k_str), float(v_str)))
    fit = growth_fit(points)
    out = args.out or "fit.json"
    _write_json(out, {"slope": fit.slope, "intercept": fit.intercept,
                      "residual": fit.residual,
                      "points": [list(p) for p in fit.points]}, cfg)
    from .plotting import plot_growth_fit
    plot_growth_fit(fit, _sibling(out, ".png"))
    print(f"fit: slope={fit.slope:.4f} residual={fit.residual:.3e} -> {out}")
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    names = (["heat", "lemma", "bounds", "forms"] if args.suite == "all"
             else [args.suite])
    report = run_suites(names, seed=cfg.seed)
    out = args.out or "verify_report.json"
    _write_json(out, report, cfg)
    for suite, checks in report["suites"].items():
        for c in checks:
            status = "PASS" if c["passed"] else "FAIL"
            print(f"[{status}] {suite}/{c['name']} margin={c['margin']:.3e} "
                  f"{c['details']}")
    return EXIT_OK if report["all_passed"] else EXIT_VERIFY_FAIL


def cmd_reproduce(args, cfg: RunConfig) -> int:
    """Chain the weight sweep and the two growth fits into one table."""
    os.makedirs(args.out_dir, exist_ok=True)
    weights = list(range(12, 61, 4))
    table = []
    pts_compact, pts_full = [], []
    for w in weights:
        basis = orthonormal_basis(w, cfg.quad)
        grid = (cfg.grid_nx, cfg.grid_ny)
        sc = supnorm_scan(w, basis, region="compact", grid=grid)
        sf = supnorm_scan(w, basis, region="full", grid=grid)
        k = w // 2
        pts_compact.append((k, sc.sup_value))
        pts_full.append((k, sf.sup_value))
        table.append((w, k, sc.sup_value, sf.sup_value,
                      sf.argmax.x, sf.argmax.y, k / (2.0 * math.pi)))
        print(f"weight {w}: compact sup {sc.sup_value:.4f}, "
              f"full sup {sf.sup_value:.4f}")
    csv_path = os.path.join(args.out_dir, "sup_table.csv")
    _write_csv(csv_path,
               ["weight", "k", "sup_compact", "sup_full",
                "argmax_x", "argmax_y", "k_over_2pi"], table, cfg)
    fit_c = growth_fit(pts_compact)
    fit_f = growth_fit(pts_full)
    _write_json(os.path.join(args.out_dir, "growth_fits.json"), {
        "compact": {"slope": fit_c.slope, "intercept": fit_c.intercept,
                    "residual": fit_c.residual},
        "full": {"slope": fit_f.slope, "intercept": fit_f.intercept,
                 "residual": fit_f.residual},
    }, cfg)
    from .plotting import plot_growth_fit
    plot_growth_fit(fit_c, os.path.join(args.out_dir, "fit_compact.png"),
                    label="compact region")
    plot_growth_fit(fit_f, os.path.join(args.out_dir, "fit_full.png"),
                    label="full capped domain")
    print(f"reproduce: compact slope {fit_c.slope:.3f}, "
          f"full slope {fit_f.slope:.3f} -> {args.out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="supnorm",
        description="Bergman-kernel sup-norm computations on the modular "
                    "surface")
    ap.add_argument("--config", help="key=value configuration file")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--cache-dir", dest="cache_dir", default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="grid scan of the Bergman diagonal")
    p.add_argument("--weight", type=_even_weight, required=True)
    p.add_argument("--region", choices=("compact", "full", "strip"),
                   default="full")
    p.add_argument("--ymax", type=float, default=None)
    p.add_argument("--ymin", type=float, default=None)
    p.add_argument("--grid", help="NX,NY")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("heat", help="heat kernel values on a radius grid")
    p.add_argument("--weight", type=_even_weight, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--rho-grid", dest="rho_grid", required=True,
                   help="a:b:step")
    p.add_argument("--out")
    p.set_defaults(func=cmd_heat)

    p = sub.add_parser("orbit", help="enumerate group orbit by displacement")
    p.add_argument("--z", required=True, help="x,y")
    p.add_argument("--rho-max", dest="rho_max", type=float, required=True)
    p.add_argument("--strategy", choices=("entry-sweep", "generator-bfs"),
                   default="entry-sweep")
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("bound", help="two-radius upper bound vs S_k on a grid")
    p.add_argument("--weight", type=_even_weight, required=True)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--rho-max", dest="rho_max", type=float, default=8.0)
    p.add_argument("--ymax", type=float, default=3.0)
    p.add_argument("--grid", help="NX,NY")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("fit", help="power-law fit of (k, sup) pairs")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run property-verification suites")
    p.add_argument("--suite", choices=("heat", "lemma", "bounds", "forms",
                                       "all"), default="all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce",
                       help="regenerate the weight sweep and growth fits")
    p.add_argument("--out-dir", dest="out_dir", default="reproduce_out")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = _load_config(args)
        return args.func(args, cfg)
    except (ValueError, OSError) as exc:
        json.dump({"error": str(exc), "kind": "usage"}, sys.stderr, indent=2)
        sys.stderr.write("\n")
        return EXIT_USAGE
    except (QuadratureError, ArithmeticError, RuntimeError,
            np.linalg.LinAlgError) as exc:
        json.dump({"error": str(exc), "kind": "numerical"}, sys.stderr,
                  indent=2)
        sys.stderr.write("\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
