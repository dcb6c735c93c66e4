"""Command-line front end: recipe subcommands with CSV/NDJSON emission.

This is the only module that touches files.  Every subcommand reads an
optional JSON config, fills documented defaults, echoes the fully
resolved configuration as a metadata block at the top of each output,
and writes deterministic bytes: the same config always produces the
same files.

Exit codes: 0 success, 2 config error, 3 numerical-contract failure
(domain, convention, measurement, integration errors, or a failed
validation check), 4 truncation/resolution failure.  Failures print one
machine-readable JSON record to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import decoherence, fock, hamiltonian, homodyne, render, walker
from .errors import (
    CavityWalkError,
    ConfigError,
    ParameterDomainError,
    ResolutionError,
    TruncationError,
)

_TWO_PI = 2.0 * math.pi

_DEFAULT_WALK = {
    "alpha0": 0.0,
    "l": 0.05,
    "theta": _TWO_PI / 3.0,
    "phi": _TWO_PI,
    "N": 10,
}

_TOP_KEYS = {
    "walk": {"walk", "grid", "convention", "seed"},
    "wigner": {"walk", "phase_grid", "convention", "seed"},
    "homodyne": {"walk", "probe", "convention", "seed"},
    "decohere": {"walk", "damping", "phase_grid", "convention", "seed"},
    "validate": {"validate", "seed"},
    "validate-rwa": {"validate", "seed"},
    "classical": {"walk", "grid", "convention", "seed"},
}


@dataclass
class RunConfig:
    """Validated config document plus output plumbing for one run."""

    command: str
    doc: dict
    out_dir: Path
    fmt: str
    convention: str
    seed: int | None
    gtp_pi: float | None = None
    resolved: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# config parsing


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config root must be an object, got {type(doc).__name__}")
    return doc


def _check_keys(block: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(block) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {unknown}")


def _as_float(value, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return float(value)


def _as_int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _as_complex(value, key: str):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(u, (int, float)) and not isinstance(u, bool) for u in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{key} must be a number or [re, im] pair, got {value!r}")


def _block(doc: dict, key: str) -> dict:
    block = doc.get(key, {})
    if not isinstance(block, dict):
        raise ConfigError(f"{key} must be an object, got {type(block).__name__}")
    return block


def _parse_walk(cfg: RunConfig) -> walker.WalkParams:
    block = _block(cfg.doc, "walk")
    _check_keys(block, {"alpha0", "l", "theta", "phi", "N", "E_abs", "g", "t"}, "walk")
    alpha0 = _as_complex(block.get("alpha0", _DEFAULT_WALK["alpha0"]), "walk.alpha0")
    l = _as_float(block.get("l", _DEFAULT_WALK["l"]), "walk.l")
    theta = _as_float(block.get("theta", _DEFAULT_WALK["theta"]), "walk.theta")
    n = _as_int(block.get("N", _DEFAULT_WALK["N"]), "walk.N")
    drive_keys = [k for k in ("E_abs", "g", "t") if k in block]
    if drive_keys and len(drive_keys) < 3:
        raise ConfigError("walk.E_abs, walk.g and walk.t must be given together")
    if drive_keys:
        e_abs = _as_float(block["E_abs"], "walk.E_abs")
        g = _as_float(block["g"], "walk.g")
        t = _as_float(block["t"], "walk.t")
        phi_derived = walker.phi_of(e_abs, g, alpha0, t)
        if "phi" in block:
            phi = _as_float(block["phi"], "walk.phi")
            if abs(phi - phi_derived) > 1e-9:
                raise ConfigError(
                    f"walk.phi={phi} disagrees with the drive parameters "
                    f"(implied phi={phi_derived})"
                )
        else:
            phi = phi_derived
        params = walker.WalkParams(
            alpha0=alpha0, l=l, theta=theta, phi=phi, N=n, E_abs=e_abs, g=g, t=t
        )
    else:
        phi = _as_float(block.get("phi", _DEFAULT_WALK["phi"]), "walk.phi")
        params = walker.WalkParams(alpha0=alpha0, l=l, theta=theta, phi=phi, N=n)
    cfg.resolved.update(
        {
            "walk.alpha0": alpha0,
            "walk.l": l,
            "walk.theta": theta,
            "walk.phi": phi,
            "walk.N": n,
        }
    )
    if drive_keys:
        cfg.resolved.update({"walk.E_abs": e_abs, "walk.g": g, "walk.t": t})
    return params


def _quadgrid_from(block: dict, where: str, default: render.QuadGrid, prefix: str = "") -> render.QuadGrid:
    lo = _as_float(block.get(prefix + "x_min", default.x_min), f"{where}.{prefix}x_min")
    hi = _as_float(block.get(prefix + "x_max", default.x_max), f"{where}.{prefix}x_max")
    points = _as_int(block.get(prefix + "points", default.points), f"{where}.{prefix}points")
    try:
        return render.QuadGrid(lo, hi, points)
    except ParameterDomainError as exc:
        raise ConfigError(f"bad {where} grid: {exc}") from exc


def _parse_xgrid(cfg: RunConfig, params: walker.WalkParams) -> render.QuadGrid:
    block = _block(cfg.doc, "grid")
    _check_keys(block, {"x_min", "x_max", "points"}, "grid")
    grid = _quadgrid_from(block, "grid", render.default_position_grid(params.N, params.l))
    cfg.resolved.update(
        {"grid.x_min": grid.x_min, "grid.x_max": grid.x_max, "grid.points": grid.points}
    )
    return grid


def _parse_phase_grid(cfg: RunConfig, params: walker.WalkParams) -> render.PhaseGrid:
    block = _block(cfg.doc, "phase_grid")
    _check_keys(
        block, {"x_min", "x_max", "x_points", "p_min", "p_max", "p_points"}, "phase_grid"
    )
    default = render.default_phase_grid(params.N, params.l)
    xg = _quadgrid_from(
        {
            "x_min": block.get("x_min", default.x.x_min),
            "x_max": block.get("x_max", default.x.x_max),
            "points": block.get("x_points", default.x.points),
        },
        "phase_grid.x",
        default.x,
    )
    pg = _quadgrid_from(
        {
            "x_min": block.get("p_min", default.p.x_min),
            "x_max": block.get("p_max", default.p.x_max),
            "points": block.get("p_points", default.p.points),
        },
        "phase_grid.p",
        default.p,
    )
    cfg.resolved.update(
        {
            "phase_grid.x_min": xg.x_min,
            "phase_grid.x_max": xg.x_max,
            "phase_grid.x_points": xg.points,
            "phase_grid.p_min": pg.x_min,
            "phase_grid.p_max": pg.x_max,
            "phase_grid.p_points": pg.points,
        }
    )
    return render.PhaseGrid(x=xg, p=pg)


def _parse_probe(cfg: RunConfig):
    block = _block(cfg.doc, "probe")
    _check_keys(
        block,
        {"gt_p", "gt_p_pi", "delta_min", "delta_max", "points", "n_max", "shots"},
        "probe",
    )
    if "gt_p" in block and "gt_p_pi" in block:
        raise ConfigError("give probe.gt_p or probe.gt_p_pi, not both")
    if cfg.gtp_pi is not None:
        gt_p = cfg.gtp_pi * math.pi
    elif "gt_p" in block:
        gt_p = _as_float(block["gt_p"], "probe.gt_p")
    elif "gt_p_pi" in block:
        gt_p = _as_float(block["gt_p_pi"], "probe.gt_p_pi") * math.pi
    else:
        gt_p = 1.5 * math.pi
    if not gt_p > 0.0:
        raise ConfigError(f"probe coupling gt_p must be positive, got {gt_p}")
    lo = _as_float(block.get("delta_min", -3.0), "probe.delta_min")
    hi = _as_float(block.get("delta_max", 3.0), "probe.delta_max")
    points = _as_int(block.get("points", 241), "probe.points")
    if points < 2:
        raise ConfigError(f"probe delta grid needs at least 2 points, got {points}")
    try:
        dgrid = render.QuadGrid(lo, hi, points)
    except ParameterDomainError as exc:
        raise ConfigError(f"bad probe delta grid: {exc}") from exc
    n_max = block.get("n_max")
    if n_max is not None:
        n_max = _as_int(n_max, "probe.n_max")
        if n_max < 0:
            raise ConfigError(f"probe.n_max must be nonnegative, got {n_max}")
    shots = block.get("shots")
    if shots is not None:
        shots = _as_int(shots, "probe.shots")
        if shots <= 0:
            raise ConfigError(f"probe.shots must be positive, got {shots}")
    cfg.resolved.update(
        {
            "probe.gt_p": gt_p,
            "probe.delta_min": dgrid.x_min,
            "probe.delta_max": dgrid.x_max,
            "probe.points": dgrid.points,
            "probe.n_max": n_max,
            "probe.shots": shots,
        }
    )
    return dgrid, gt_p, n_max, shots


def _parse_damping(cfg: RunConfig, params: walker.WalkParams) -> list:
    block = _block(cfg.doc, "damping")
    _check_keys(block, {"kt_schedule"}, "damping")
    sched = block.get("kt_schedule")
    if sched is None:
        sched = decoherence.default_kt_schedule(max(params.N, 1), params.l)
    else:
        if not isinstance(sched, list) or not sched:
            raise ConfigError("damping.kt_schedule must be a nonempty list of numbers")
        sched = [_as_float(v, "damping.kt_schedule[]") for v in sched]
        if any(v < 0.0 for v in sched):
            raise ConfigError("damping.kt_schedule entries must be >= 0")
    cfg.resolved["damping.kt_schedule"] = list(sched)
    return sched


def _parse_validate(cfg: RunConfig):
    block = _block(cfg.doc, "validate")
    _check_keys(block, {"ratios", "gt", "draws"}, "validate")
    ratios = block.get("ratios", [5.0, 20.0, 50.0])
    if not isinstance(ratios, list) or not ratios:
        raise ConfigError("validate.ratios must be a nonempty list of numbers")
    ratios = [_as_float(v, "validate.ratios[]") for v in ratios]
    if any(not v > 0.0 for v in ratios) or ratios != sorted(ratios):
        raise ConfigError("validate.ratios must be positive and ascending")
    gt = _as_float(block.get("gt", 0.1), "validate.gt")
    if not gt > 0.0:
        raise ConfigError(f"validate.gt must be positive, got {gt}")
    draws = _as_int(block.get("draws", 20), "validate.draws")
    if draws < 1:
        raise ConfigError(f"validate.draws must be >= 1, got {draws}")
    cfg.resolved.update({"validate.ratios": ratios, "validate.gt": gt, "validate.draws": draws})
    return ratios, gt, draws


# ---------------------------------------------------------------------------
# output formatting


def _fmt_scalar(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12e}"
    if isinstance(value, complex):
        return f"{value.real:.12e}{value.imag:+.12e}j"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt_scalar(v) for v in value) + "]"
    return str(value)


def _json_scalar(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_json_scalar(v) for v in value]
    return value


def _write_table(path: Path, fmt: str, resolved: dict, columns, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        if fmt == "csv":
            for key in sorted(resolved):
                fh.write(f"# {key} = {_fmt_scalar(resolved[key])}\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt_scalar(v) for v in row) + "\n")
        else:
            meta = {k: _json_scalar(v) for k, v in resolved.items()}
            fh.write(json.dumps({"meta": meta}, sort_keys=True) + "\n")
            for row in rows:
                record = {c: _json_scalar(v) for c, v in zip(columns, row)}
                fh.write(json.dumps(record, sort_keys=True) + "\n")


def _out_path(cfg: RunConfig, stem: str, suffix: str | None = None) -> Path:
    ext = suffix if suffix is not None else (".csv" if cfg.fmt == "csv" else ".ndjson")
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    return cfg.out_dir / f"{stem}{ext}"


def _wigner_rows(pgrid: render.PhaseGrid, w: np.ndarray):
    xs = pgrid.x.values()
    ps = pgrid.p.values()
    for i in range(xs.size):
        row = w[i]
        for j in range(ps.size):
            yield (xs[i], ps[j], row[j])


# ---------------------------------------------------------------------------
# subcommands


def cmd_walk(cfg: RunConfig) -> int:
    params = _parse_walk(cfg)
    grid = _parse_xgrid(cfg, params)
    state = walker.walk(params)
    p = render.position_distribution(state, grid, cfg.convention)
    stats = render.distribution_stats(grid, p)
    cfg.resolved.update(
        {
            "result.peak_x": stats.peak_x,
            "result.mean_x": stats.mean,
            "result.variance_x": stats.variance,
        }
    )
    _write_table(
        _out_path(cfg, "walk_px"), cfg.fmt, cfg.resolved, ("x", "P"), zip(grid.values(), p)
    )
    state_path = _out_path(cfg, "walk_state", ".json")
    with open(state_path, "w", newline="\n") as fh:
        fh.write(
            json.dumps(
                {
                    "params": {
                        "alpha0": _json_scalar(params.alpha0),
                        "l": params.l,
                        "theta": params.theta,
                        "phi": params.phi,
                        "N": params.N,
                    },
                    "state": state.to_json_dict(),
                },
                sort_keys=True,
            )
            + "\n"
        )
    return 0


def cmd_wigner(cfg: RunConfig) -> int:
    params = _parse_walk(cfg)
    pgrid = _parse_phase_grid(cfg, params)
    state = walker.walk(params)
    w = render.wigner_pure(state, pgrid, cfg.convention)
    moments = render.wigner_moments(pgrid, w)
    cfg.resolved.update(
        {
            "result.integral": moments.integral,
            "result.min_wigner": float(np.min(w)),
            "result.mean_x": moments.mean_x,
            "result.mean_p": moments.mean_p,
        }
    )
    _write_table(
        _out_path(cfg, "wigner"), cfg.fmt, cfg.resolved, ("x", "p", "W"), _wigner_rows(pgrid, w)
    )
    return 0


def cmd_homodyne(cfg: RunConfig) -> int:
    params = _parse_walk(cfg)
    dgrid, gt_p, n_max, shots = _parse_probe(cfg)
    state = walker.walk(params)
    scan = homodyne.delta_scan(state, params.alpha0, dgrid, gt_p, n_max)
    finite = np.isfinite(scan.p_g)
    if np.any(finite):
        best = int(np.flatnonzero(finite)[np.argmax(scan.p_g[finite])])
        cfg.resolved["result.peak_delta"] = float(scan.delta[best])
    rows = zip(scan.delta, scan.p_g, scan.n_max_used, scan.tail_mass)
    _write_table(
        _out_path(cfg, "homodyne_scan"),
        cfg.fmt,
        cfg.resolved,
        ("delta", "P_g", "n_max_used", "tail_mass"),
        rows,
    )
    if shots is not None:
        counts = homodyne.sample_detections(scan, shots, cfg.seed)
        _write_table(
            _out_path(cfg, "homodyne_detections"),
            cfg.fmt,
            cfg.resolved,
            ("delta", "shots", "n_ground"),
            zip(scan.delta, [shots] * counts.size, counts),
        )
    return 0


def cmd_decohere(cfg: RunConfig) -> int:
    params = _parse_walk(cfg)
    schedule = _parse_damping(cfg, params)
    pgrid = _parse_phase_grid(cfg, params)
    state = walker.walk(params)
    cfg.resolved["note.peak_x"] = "moment_fit_center"
    diag_rows = []
    for i, kt in enumerate(schedule):
        rho = decoherence.damp(state, decoherence.DampSpec.from_kt(kt))
        w = render.wigner_density(rho, pgrid, cfg.convention)
        pur = decoherence.purity(rho)
        moments = render.wigner_moments(pgrid, w)
        min_w = float(np.min(w))
        grid_meta = dict(cfg.resolved)
        grid_meta.update(
            {"damping.kt": kt, "result.min_wigner": min_w, "result.purity": pur}
        )
        _write_table(
            _out_path(cfg, f"decohere_wigner_{i}"),
            cfg.fmt,
            grid_meta,
            ("x", "p", "W"),
            _wigner_rows(pgrid, w),
        )
        diag_rows.append((kt, pur, min_w, moments.mean_x, moments.var_x))
    _write_table(
        _out_path(cfg, "decohere_diagnostics"),
        cfg.fmt,
        cfg.resolved,
        ("kt", "purity", "min_wigner", "peak_x", "variance_x"),
        diag_rows,
    )
    return 0


def _validate_rows(cfg: RunConfig, rwa_only: bool) -> list:
    ratios, gt, draws = _parse_validate(cfg)
    rng = np.random.default_rng(cfg.seed if cfg.seed is not None else 0)
    rows = []

    dim = fock.adequate_dim(0.0)
    psi0 = fock.with_spin(0.0, 1.0, fock.coherent_vector(0.0, dim))
    fidelities = []
    for r in ratios:
        spec = hamiltonian.DriveSpec(g=1.0, E=r)
        fid = hamiltonian.rwa_fidelity(spec, psi0, gt)
        fidelities.append(fid)
        rows.append((f"rwa_fidelity_ratio_{r:g}", fid, 1.0, fid <= 1.0))
    infid = 1.0 - fidelities[-1]
    rows.append(("rwa_infidelity_largest_ratio", infid, 0.01, infid <= 0.01))
    defect = max(
        [0.0] + [fidelities[i] - fidelities[i + 1] for i in range(len(fidelities) - 1)]
    )
    rows.append(("rwa_monotonicity_defect", defect, 0.0, defect <= 0.0))

    residual = 0.0
    for _ in range(draws):
        mag = rng.uniform(0.1, 3.0)
        ang = rng.uniform(-math.pi, math.pi)
        e = mag * complex(math.cos(ang), math.sin(ang))
        t = rng.uniform(0.0, 4.0)
        spec = hamiltonian.DriveSpec(g=1.0, E=e)
        for analytic, op in (
            (hamiltonian.transformed_spin_plus, fock.SPIN_PLUS),
            (hamiltonian.transformed_spin_minus, fock.SPIN_MINUS),
        ):
            diff = analytic(spec, t) - hamiltonian.conjugated_spin(spec, t, op)
            residual = max(residual, float(np.max(np.abs(diff))))
    rows.append(("spin_transform_residual", residual, 1e-10, residual <= 1e-10))

    if not rwa_only:
        centers = rng.uniform(-1.5, 1.5, 3) + 1j * rng.uniform(-1.0, 1.0, 3)
        weights = rng.normal(size=3) + 1j * rng.normal(size=3)
        state = walker.normalize(walker.WalkerState(weights, centers))
        mdim = fock.adequate_dim(float(np.max(np.abs(centers))))
        rho0 = walker.to_density_matrix(walker.dyad_expansion(state), mdim)
        worst = 0.0
        for kt in (0.1, 0.5, 1.0):
            numeric = fock.evolve_lindblad(rho0, kappa=1.0, t=kt)
            analytic = walker.to_density_matrix(
                decoherence.damp(state, decoherence.DampSpec(kappa=1.0, t=kt)), mdim
            )
            worst = max(worst, float(np.max(np.abs(numeric - analytic))))
        rows.append(("damp_vs_lindblad_residual", worst, 1e-6, worst <= 1e-6))
    return rows


def cmd_validate(cfg: RunConfig) -> int:
    rows = _validate_rows(cfg, rwa_only=cfg.command == "validate-rwa")
    cfg.resolved["note.threshold_rule"] = "pass_when_value_at_most_threshold"
    _write_table(
        _out_path(cfg, "validate_report"),
        cfg.fmt,
        cfg.resolved,
        ("check", "value", "threshold", "passed"),
        rows,
    )
    return 0 if all(r[3] for r in rows) else 3


def cmd_classical(cfg: RunConfig) -> int:
    params = _parse_walk(cfg)
    grid = _parse_xgrid(cfg, params)
    mixture = walker.classical_mixture(params.N, params.alpha0, params.l)
    p_classical = render.position_distribution_density(mixture, grid, cfg.convention)
    state = walker.walk(params)
    p_quantum = render.position_distribution(state, grid, cfg.convention)
    cfg.resolved["result.l1_distance"] = render.l1_distance(grid, p_classical, p_quantum)
    _write_table(
        _out_path(cfg, "classical_px"),
        cfg.fmt,
        cfg.resolved,
        ("x", "P_classical", "P_quantum"),
        zip(grid.values(), p_classical, p_quantum),
    )
    return 0


_COMMANDS = {
    "walk": cmd_walk,
    "wigner": cmd_wigner,
    "homodyne": cmd_homodyne,
    "decohere": cmd_decohere,
    "validate": cmd_validate,
    "validate-rwa": cmd_validate,
    "classical": cmd_classical,
}


# ---------------------------------------------------------------------------
# entry point


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON config file")
    p.add_argument("--out", metavar="DIR", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "ndjson"), default="csv")
    p.add_argument("--convention", choices=(render.AMPLITUDE, render.QUADRATURE))
    p.add_argument("--seed", type=int, help="seed for the optional samplers")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavitywalk",
        description="Driven-cavity quantum walk: states, phase-space views, probe scans, damping.",
    )
    sub = parser.add_subparsers(dest="command")
    helps = {
        "walk": "conditional N-step walker state and its P(x)",
        "wigner": "Wigner surface of the walker state",
        "homodyne": "probe-atom ground-probability scan over injected delta",
        "decohere": "damped Wigner grids and purity diagnostics along a kt schedule",
        "validate": "strong-drive reduction and oracle cross-checks",
        "validate-rwa": "drive-conjugation and strong-drive checks only",
        "classical": "incoherent mixture P(x) next to the quantum P(x)",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name == "homodyne":
            p.add_argument(
                "--gtp-pi",
                type=float,
                dest="gtp_pi",
                help="probe coupling gt_p in units of pi (overrides config)",
            )
    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    doc = _load_config(args.config)
    _check_keys(doc, _TOP_KEYS[args.command], "config")
    conv_doc = doc.get("convention")
    if conv_doc is not None and conv_doc not in (render.AMPLITUDE, render.QUADRATURE):
        raise ConfigError(
            f"convention must be '{render.AMPLITUDE}' or '{render.QUADRATURE}', got {conv_doc!r}"
        )
    convention = args.convention or conv_doc or render.AMPLITUDE
    seed_doc = doc.get("seed")
    if seed_doc is not None:
        seed_doc = _as_int(seed_doc, "seed")
    seed = args.seed if args.seed is not None else seed_doc
    cfg = RunConfig(
        command=args.command,
        doc=doc,
        out_dir=Path(args.out),
        fmt=args.format,
        convention=convention,
        seed=seed,
        gtp_pi=getattr(args, "gtp_pi", None),
    )
    cfg.resolved.update(
        {
            "command": cfg.command,
            "format": cfg.fmt,
            "convention": cfg.convention,
            "seed": cfg.seed,
        }
    )
    return cfg


def _emit_error(exc: Exception) -> None:
    record = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](_resolve(args))
    except ConfigError as exc:
        _emit_error(exc)
        return 2
    except (TruncationError, ResolutionError) as exc:
        _emit_error(exc)
        return 4
    except CavityWalkError as exc:
        _emit_error(exc)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
