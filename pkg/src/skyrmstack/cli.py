"""Command-line interface: parameter pipeline, tables, scans, minimization.

Every subcommand resolves its configuration from three layers (defaults,
then a JSON config file given with --config, then explicit flags), runs one
module, and writes the result to stdout or atomically to --output.  Output
files embed a provenance header: tool version, a SHA-256 hash of the
resolved configuration, and the parameter echo itself.  Identical
configuration and seed produce byte-identical files; no timestamps are
written.

Exit codes: 0 success, 2 validation/configuration error, 3 numerical
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__, bp_profile, kernels, optimize, shapefun, units
from .energy import (
    EnergyBreakdown,
    SkyrmionLayerParams,
    SkyrmionStack,
    energy_full,
    energy_reduced,
)
from .errors import NumericError, SkyrmstackError
from .specfun import SpecialFunctionId, evaluate
from .units import MaterialParams, RescaledParams

_VALIDATION_EXIT = 2
_NUMERIC_EXIT = 3
_IO_EXIT = 4

COMMANDS = (
    "nondim",
    "specfun",
    "kernels",
    "shapefun",
    "energy",
    "minimize",
    "bilayer",
    "scan",
    "landscape",
    "oracle",
)


def _fmt(value, precision: int) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(value) if precision <= 0 else format(value, f".{precision}g")
    return str(value)


def _config_hash(resolved: dict) -> str:
    blob = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _provenance(resolved: dict) -> dict:
    return {
        "tool": "skyrmstack",
        "version": __version__,
        "config_hash": _config_hash(resolved),
        "config": resolved,
    }


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".skyrmstack-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_table(rows, schema, resolved: dict, precision: int) -> str:
    """Render rows as CSV with the provenance comment header.

    ``rows`` is a sequence of dicts keyed exactly by ``schema``; decimal
    points, no thousands separators, newline-terminated lines.
    """
    prov = _provenance(resolved)
    lines = [
        f"# skyrmstack {prov['version']}",
        f"# config-hash: {prov['config_hash']}",
        f"# config: {json.dumps(resolved, sort_keys=True, separators=(',', ':'))}",
        ",".join(schema),
    ]
    for row in rows:
        missing = set(schema) - set(row)
        if missing:
            raise SkyrmstackError(f"row is missing schema fields {sorted(missing)}")
        lines.append(",".join(_fmt(row[name], precision) for name in schema))
    return "\n".join(lines) + "\n"


def emit_json(payload, resolved: dict, precision: int) -> str:
    document = {"_provenance": _provenance(resolved), "result": payload}
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _write(text: str, output: str | None):
    if output:
        _atomic_write(output, text)
    else:
        sys.stdout.write(text)


def _parse_range(spec: str) -> list[float]:
    """Parse 'start:stop:step' (or a comma list) into a value grid."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) not in (3, 4):
            raise SkyrmstackError(f"range must be start:stop:step[:log], got {spec!r}")
        start, stop, step = (float(p) for p in parts[:3])
        if len(parts) == 4:
            if parts[3] != "log":
                raise SkyrmstackError(f"unknown range modifier {parts[3]!r}")
            return [float(v) for v in np.geomspace(start, stop, int(step))]
        if step <= 0:
            raise SkyrmstackError("range step must be > 0")
        count = int(round((stop - start) / step)) + 1
        return [start + i * step for i in range(count)]
    return [float(v) for v in spec.split(",")]


# ---------------------------------------------------------------------------
# per-command runners; each takes the resolved param dict


def _material_from(params: dict) -> MaterialParams:
    return MaterialParams(
        exchange_stiffness=params["A"],
        saturation_magnetization=params["Ms"],
        bulk_anisotropy=params["Ku"],
        layer_thickness=params["d"],
        spacer_ratio=params["a"],
        layer_count=int(params["N"]),
        surface_anisotropy_top=params["Ks_plus"],
        surface_anisotropy_bottom=params["Ks_minus"],
        dmi_top=params["Ds_plus"],
        dmi_bottom=params["Ds_minus"],
        applied_field=params["Ha"],
    )


def _rescaled_from(params: dict) -> RescaledParams:
    return RescaledParams(
        delta_bar=params["delta_bar"],
        h_bar=params.get("h_bar", 0.0),
        kappa_bar=params.get("kappa_bar", 0.0),
        L0=params.get("L0", units.DEFAULT_L0),
    )


def _run_nondim(params, resolved, precision):
    m = _material_from(params)
    dim = units.derive_dimensionless(m)
    report = {"material": vars(m).copy(), "dimensionless": dim.to_dict()}
    if dim.Q > 1.0:
        resc = units.rescale(dim, params.get("L0", units.DEFAULT_L0))
        report["rescaled"] = resc.to_dict()
    else:
        report["rescaled"] = None
        report["note"] = "Q <= 1: the reduced model does not apply"
    return emit_json(report, resolved, precision)


def _run_specfun(params, resolved, precision):
    fid = SpecialFunctionId(params["fn"])
    grid = _parse_range(params["x"])
    rows = [{"x": x, "value": float(evaluate(fid, x))} for x in grid]
    return emit_table(rows, ("x", "value"), resolved, precision)


def _run_kernels(params, resolved, precision):
    kind = params["kind"]
    u, delta = params["u"], params["delta"]
    rows = []
    for r in _parse_range(params["r"]):
        rows.append(
            {
                "kind": kind,
                "u": u,
                "delta": delta,
                "r": r,
                "exact": kernels.kernel_exact(kind, u, delta, r),
                "oracle": kernels.kernel_oracle(kind, u, delta, r),
                "asymptotic": kernels.kernel_asymptotic(kind, u, delta, r),
            }
        )
    schema = ("kind", "u", "delta", "r", "exact", "oracle", "asymptotic")
    return emit_table(rows, schema, resolved, precision)


def _run_shapefun(params, resolved, precision):
    rows = []
    for alpha in _parse_range(params["alpha"]):
        for lam in _parse_range(params["lam"]):
            vals, err = shapefun._integrate_pair(alpha, lam, shapefun.DEFAULT_QUAD)
            rows.append(
                {
                    "alpha": alpha,
                    "lambda": lam,
                    "f_vv": float(vals[0]),
                    "f_ss": float(vals[1]),
                    "f_vs": float(vals[2]),
                    "err_est": err,
                }
            )
    schema = ("alpha", "lambda", "f_vv", "f_ss", "f_vs", "err_est")
    return emit_table(rows, schema, resolved, precision)


def _stack_from(params: dict) -> SkyrmionStack:
    layers = []
    for spec in params["layers"]:
        layers.append(
            SkyrmionLayerParams(
                rho=spec["rho"],
                theta=spec.get("theta", 0.0),
                center=tuple(spec.get("center", (0.0, 0.0))),
                L=spec.get("L"),
            )
        )
    return SkyrmionStack(layers)


def _breakdown_payload(bd: EnergyBreakdown) -> dict:
    return bd.to_dict()


def _run_energy(params, resolved, precision):
    stack = _stack_from(params)
    p = _rescaled_from(params)
    if all(la.L is not None for la in stack.layers):
        bd = energy_full(stack, p)
        form = "full"
    else:
        bd = energy_reduced(stack, p)
        form = "reduced"
    return emit_json({"form": form} | _breakdown_payload(bd), resolved, precision)


def _minimize_payload(res) -> dict:
    return {
        "energy": res.energy,
        "converged": res.converged,
        "iterations": res.iterations,
        "grad_norm": res.grad_norm,
        "boundary_flags": list(res.boundary_flags),
        "layers": [
            {"rho": la.rho, "theta": la.theta, "center": list(la.center)}
            for la in res.stack.layers
        ],
    }


def _run_minimize(params, resolved, precision):
    p = _rescaled_from(params)
    centers = [tuple(float(v) for v in c) for c in params["centers"]]
    res = optimize.minimize_fixed_positions(centers, p)
    return emit_json(_minimize_payload(res), resolved, precision)


def _run_bilayer(params, resolved, precision):
    p = _rescaled_from(params)
    res = optimize.bilayer_global(p, verify_numeric=not params.get("skip_numeric_check"))
    payload = _minimize_payload(res)
    payload["rho"] = res.stack.layers[0].rho
    if "numeric" in res.diagnostics:
        num = res.diagnostics["numeric"]
        payload["numeric_check"] = {
            "rho": list(num["rho"]),
            "theta": list(num["theta"]),
            "separation": num["separation"],
            "energy": num["energy"],
        }
    return emit_json(payload, resolved, precision)


def _run_scan(params, resolved, precision):
    p = _rescaled_from(params)
    rows = optimize.separation_scan(p, _parse_range(params["r"]))
    schema = ("r", "energy", "rho_opt", "c1_opt", "c2_opt")
    return emit_table([vars(row) for row in rows], schema, resolved, precision)


def _run_landscape(params, resolved, precision):
    p = _rescaled_from(params)
    grid = optimize.landscape_grid(p, _parse_range(params["rho"]), _parse_range(params["r"]))
    rows = []
    for i, rho in enumerate(grid.rho_values):
        for j, r in enumerate(grid.r_values):
            rows.append(
                {
                    "rho": float(rho),
                    "r": float(r),
                    "energy": float(grid.energy[i, j]),
                    "neglog_energy": float(grid.neglog_energy[i, j]),
                }
            )
    schema = ("rho", "r", "energy", "neglog_energy")
    return emit_table(rows, schema, resolved, precision)


def _run_oracle(params, resolved, precision):
    prof = bp_profile.BPProfile(
        rho=params.get("rho", 0.05), theta=params.get("theta", 0.0), L=params.get("L", 100.0)
    )
    p = RescaledParams(
        delta_bar=params.get("delta_bar", 0.25),
        h_bar=params.get("h_bar", 0.0),
        kappa_bar=params.get("kappa_bar", 0.1),
    )
    checks = []

    def record(name, value, target, tol):
        checks.append(
            {
                "check": name,
                "value": value,
                "target": target,
                "tolerance": tol,
                "status": "pass" if abs(value - target) <= tol else "fail",
            }
        )

    pts = np.array([[prof.rho, 0.0], [0.3, 0.2], [2.0, -1.0]])
    m = bp_profile.profile_value(prof, pts)
    record("unit_norm", float(np.max(np.abs(1 - np.linalg.norm(m, axis=-1)))), 0.0, 1e-12)
    sj = prof.rho * prof.junction
    below = bp_profile.profile_value(prof, (sj * (1 - 1e-12), 0.0))
    above = bp_profile.profile_value(prof, (sj * (1 + 1e-12), 0.0))
    record("junction_continuity", float(np.max(np.abs(below - above))), 0.0, 1e-10)
    record(
        "topological_degree",
        bp_profile.topological_degree(
            bp_profile.BPProfile(0.1, 0.0, 20.0), params.get("grid", 1024), 3.0
        ),
        1.0,
        5e-3,
    )
    ex, an, ze, dm = bp_profile.local_energies_radial(prof, p)
    exr, anr, zer, dmr = bp_profile.reduced_layer_energies(prof, p)
    record("exchange_excess_ratio", (ex - 8 * math.pi) / (exr - 8 * math.pi), 1.0, 0.1)
    record("anisotropy_ratio", an / anr, 1.0, 0.1)
    if dmr != 0.0:
        record("dmi_ratio", dm / dmr, 1.0, 0.1)
    rows = bp_profile.fourier_tail_check(prof, [0.05 / prof.rho, 0.5 / prof.rho])
    for row in rows:
        record(f"hankel_vv_ratio_qrho_{row.q_rho:g}", row.ratio_vv, 1.0, 0.1)
        record(f"hankel_ss_ratio_qrho_{row.q_rho:g}", row.ratio_ss, 1.0, 0.1)
    payload = {
        "all_passed": all(c["status"] == "pass" for c in checks),
        "checks": checks,
    }
    return emit_json(payload, resolved, precision)


_RUNNERS = {
    "nondim": _run_nondim,
    "specfun": _run_specfun,
    "kernels": _run_kernels,
    "shapefun": _run_shapefun,
    "energy": _run_energy,
    "minimize": _run_minimize,
    "bilayer": _run_bilayer,
    "scan": _run_scan,
    "landscape": _run_landscape,
    "oracle": _run_oracle,
}

# defaults per command; config file and flags override in that order
_DEFAULTS: dict[str, dict] = {
    "nondim": {
        "Ks_plus": 0.0,
        "Ks_minus": 0.0,
        "Ds_plus": 0.0,
        "Ds_minus": 0.0,
        "a": 2.0,
        "N": 2,
        "Ha": 0.0,
        "L0": units.DEFAULT_L0,
    },
    "specfun": {"x": "0.5:5:0.5"},
    "kernels": {"kind": "ss", "u": 0.0, "delta": 0.1, "r": "0.1:2:0.1"},
    "shapefun": {"alpha": "1", "lam": "0"},
    "energy": {},
    "minimize": {"h_bar": 0.0, "kappa_bar": 0.0, "L0": units.DEFAULT_L0},
    "bilayer": {"L0": units.DEFAULT_L0, "skip_numeric_check": False},
    "scan": {"r": "0:0.2:0.002", "L0": units.DEFAULT_L0},
    "landscape": {"rho": "0.001:0.0999:60:log", "r": "0:0.2:0.005", "L0": units.DEFAULT_L0},
    "oracle": {"rho": 0.05, "theta": 0.0, "L": 100.0, "delta_bar": 0.25, "kappa_bar": 0.1},
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skyrmstack",
        description="Reduced energy model for stacked skyrmions in ultrathin multilayers",
    )
    parser.add_argument("--version", action="version", version=f"skyrmstack {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file; flags override its values")
        sp.add_argument("--output", help="write here (atomic); default stdout")
        sp.add_argument("--format", choices=("csv", "json"), help="output format")
        sp.add_argument("--seed", type=int, help="multi-start determinism tag (echoed)")
        sp.add_argument(
            "--precision",
            type=int,
            help="significant digits for text output; 0 = shortest round-trip",
        )

    sp = sub.add_parser("nondim", help="material parameters -> dimensionless report")
    for flag, typ in (
        ("--A", float), ("--Ms", float), ("--Ku", float), ("--d", float),
        ("--a", float), ("--N", int), ("--Ha", float), ("--Ks-plus", float),
        ("--Ks-minus", float), ("--Ds-plus", float), ("--Ds-minus", float),
        ("--L0", float),
    ):
        sp.add_argument(flag, type=typ, dest=flag.lstrip("-").replace("-", "_"))
    common(sp)

    sp = sub.add_parser("specfun", help="special-function table")
    sp.add_argument("--fn", choices=[f.value for f in SpecialFunctionId])
    sp.add_argument("--x", help="grid: start:stop:step or comma list")
    common(sp)

    sp = sub.add_parser("kernels", help="interaction-kernel table")
    sp.add_argument("--kind", choices=("vv", "vs", "ss", "sv"))
    sp.add_argument("--u", type=float)
    sp.add_argument("--delta", type=float)
    sp.add_argument("--r", help="grid: start:stop:step")
    common(sp)

    sp = sub.add_parser("shapefun", help="shape-function table")
    sp.add_argument("--alpha", help="grid or comma list")
    sp.add_argument("--lam", help="grid or comma list")
    common(sp)

    sp = sub.add_parser("energy", help="stack energy breakdown from a JSON stack file")
    sp.add_argument("--stack", help="JSON file with layers and parameters")
    common(sp)

    sp = sub.add_parser("minimize", help="minimize over radii and angles, centers fixed")
    sp.add_argument("--centers", help="centers as 'x1,y1;x2,y2;...'")
    sp.add_argument("--delta-bar", type=float, dest="delta_bar")
    sp.add_argument("--kappa-bar", type=float, dest="kappa_bar")
    sp.add_argument("--L0", type=float)
    common(sp)

    sp = sub.add_parser("bilayer", help="closed-form bilayer global minimizer")
    sp.add_argument("--delta-bar", type=float, dest="delta_bar")
    sp.add_argument("--L0", type=float)
    sp.add_argument(
        "--skip-numeric-check",
        action="store_true",
        default=None,
        dest="skip_numeric_check",
    )
    common(sp)

    sp = sub.add_parser("scan", help="bilayer separation scan")
    sp.add_argument("--delta-bar", type=float, dest="delta_bar")
    sp.add_argument("--r", help="separation grid start:stop:step")
    sp.add_argument("--L0", type=float)
    common(sp)

    sp = sub.add_parser("landscape", help="bilayer (rho, r) energy grid")
    sp.add_argument("--delta-bar", type=float, dest="delta_bar")
    sp.add_argument("--rho", help="radius grid (use :log for geometric)")
    sp.add_argument("--r", help="separation grid")
    sp.add_argument("--L0", type=float)
    common(sp)

    sp = sub.add_parser("oracle", help="BP-ansatz validation report")
    sp.add_argument("--rho", type=float)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--L", type=float)
    sp.add_argument("--delta-bar", type=float, dest="delta_bar")
    sp.add_argument("--kappa-bar", type=float, dest="kappa_bar")
    sp.add_argument("--grid", type=int)
    common(sp)

    return parser


_META_KEYS = ("config", "output", "format", "seed", "precision", "command")


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags into one resolved config."""
    command = args.command
    params = dict(_DEFAULTS.get(command, {}))
    meta = {"seed": 0, "precision": 0, "format": None, "output": None}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        if file_cfg.get("command", command) != command:
            raise SkyrmstackError(
                f"config file is for command {file_cfg['command']!r}, not {command!r}"
            )
        params.update(file_cfg.get("params", {}))
        for key in ("seed", "precision", "format", "output"):
            if key in file_cfg:
                meta[key] = file_cfg[key]
    for key, value in vars(args).items():
        if key in _META_KEYS or value is None:
            continue
        params[key] = value
    for key in ("seed", "precision", "format", "output"):
        value = getattr(args, key, None)
        if value is not None:
            meta[key] = value

    if command == "energy" and "stack" in params and isinstance(params["stack"], str):
        with open(params["stack"]) as fh:
            params.update(json.load(fh))
        del params["stack"]
    if command == "minimize" and isinstance(params.get("centers"), str):
        params["centers"] = [
            [float(v) for v in pair.split(",")] for pair in params["centers"].split(";")
        ]
    return {
        "command": command,
        "params": params,
        "seed": meta["seed"],
        "precision": meta["precision"],
        "format": meta["format"],
        "output": meta["output"],
    }


def run(resolved: dict) -> int:
    """Execute a resolved configuration; returns the process exit code."""
    command = resolved["command"]
    try:
        text = _RUNNERS[command](resolved["params"], resolved, resolved["precision"])
    except NumericError as exc:
        print(f"skyrmstack: numerical failure: {exc} {exc.details}", file=sys.stderr)
        return _NUMERIC_EXIT
    except (SkyrmstackError, KeyError, ValueError) as exc:
        print(f"skyrmstack: invalid input: {exc!r}", file=sys.stderr)
        return _VALIDATION_EXIT
    try:
        _write(text, resolved["output"])
    except OSError as exc:
        print(f"skyrmstack: cannot write output: {exc}", file=sys.stderr)
        return _IO_EXIT
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        resolved = _resolve(args)
    except (OSError, json.JSONDecodeError, SkyrmstackError, ValueError) as exc:
        print(f"skyrmstack: configuration error: {exc}", file=sys.stderr)
        return _VALIDATION_EXIT
    return run(resolved)


if __name__ == "__main__":
    sys.exit(main())
