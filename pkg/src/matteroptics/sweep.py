"""Deterministic single-axis parameter sweeps across the diffraction paths.

Each sweep point rebuilds the full parameter set with one field swapped,
evaluates the requested diffraction paths, and records cross-path
discrepancies plus validity flags. Points that fail a physics guard are
kept as error rows; only a sweep in which every point fails raises.

Determinism contract: rows are keyed by input index and each point's
floating-point work is sequential and self-contained, so the output is
byte-identical regardless of thread count.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Mapping, Sequence

from .diffraction import (
    DiffractionPattern,
    analytic_orders,
    commensurate_grid,
    numeric_orders,
    pattern_discrepancy,
    propagator_orders,
)
from .errors import ConfigurationError, MatterOpticsError, SweepError
from .models import characteristic_volume, raman_nath_params
from .optics import adiabatically_valid
from .serialize import csv_num
from .units import PhysicalParams, params_to_system

_PATH_ORDER = ("analytic", "numeric", "propagator")

# Validity thresholds. A point is flagged, not rejected: flagged rows
# still carry numbers, they just fall outside the regime in which the
# cross-path agreement claims hold.
_POLE_DISTANCE_MIN = 0.1   # min |1 + V0 rho| and |1 + 2 V0 rho|
_BROADNESS_MIN = 10.0      # packet width in units of 2 pi / (n k_L)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep: one axis, ordered values, chosen paths."""

    base: PhysicalParams
    axis: str
    values: tuple[float, ...]
    paths: tuple[str, ...]
    q_max: int
    grid_points: int = 4096
    z_steps: int = 2048
    box_lambdas: float = 128.0

    def __post_init__(self):
        names = {f.name for f in fields(PhysicalParams)}
        if self.axis not in names:
            raise ConfigurationError(
                f"axis {self.axis!r} is not a parameter field; valid axes: "
                + ", ".join(sorted(names))
            )
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ConfigurationError("sweep needs at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise ConfigurationError("sweep values must be finite")
        object.__setattr__(self, "values", vals)
        pth = tuple(p for p in _PATH_ORDER if p in self.paths)
        unknown = set(self.paths) - set(_PATH_ORDER)
        if unknown:
            raise ConfigurationError(
                f"unknown paths {sorted(unknown)}; choose from {list(_PATH_ORDER)}"
            )
        if not pth:
            raise ConfigurationError("at least one path must be selected")
        object.__setattr__(self, "paths", pth)
        if self.q_max < 0:
            raise ConfigurationError(f"q_max must be nonnegative, got {self.q_max}")


@dataclass(frozen=True)
class SweepRow:
    """One evaluated point; error rows keep every numeric field None."""

    value: float
    tau: float | None
    patterns: Mapping[str, DiffractionPattern] | None
    discrepancy: float | None
    adiabatic_ok: bool | None
    pole_ok: bool | None
    broadness_ok: bool | None
    error: str | None = None

    def valid(self) -> bool:
        return (
            self.error is None
            and bool(self.adiabatic_ok)
            and bool(self.pole_ok)
            and bool(self.broadness_ok)
        )


def _evaluate_point(spec: SweepSpec, value: float) -> SweepRow:
    try:
        point = replace(spec.base, **{spec.axis: value})
        rn = raman_nath_params(point)
        patterns: dict[str, DiffractionPattern] = {}
        if "analytic" in spec.paths:
            patterns["analytic"] = analytic_orders(rn.tau, spec.q_max)
        if "numeric" in spec.paths or "propagator" in spec.paths:
            grid = commensurate_grid(point, spec.grid_points, spec.box_lambdas)
            if "numeric" in spec.paths:
                patterns["numeric"] = numeric_orders(point, rn, grid, spec.q_max)
            if "propagator" in spec.paths:
                patterns["propagator"] = propagator_orders(
                    point, grid, spec.q_max, z_steps=spec.z_steps
                )
        discrepancy = 0.0
        names = list(patterns)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                discrepancy = max(
                    discrepancy, pattern_discrepancy(patterns[a], patterns[b])
                )
        v0rho = characteristic_volume(point) * point.rho_0
        pole_ok = min(abs(1.0 + v0rho), abs(1.0 + 2.0 * v0rho)) >= _POLE_DISTANCE_MIN
        nk = point.harmonic * point.k_l
        broadness_ok = point.w_y * nk / (2.0 * math.pi) >= _BROADNESS_MIN
        return SweepRow(
            value=value,
            tau=rn.tau,
            patterns=patterns,
            discrepancy=discrepancy,
            adiabatic_ok=adiabatically_valid(point, point.rho_0),
            pole_ok=pole_ok,
            broadness_ok=broadness_ok,
        )
    except MatterOpticsError as exc:
        return SweepRow(
            value=value,
            tau=None,
            patterns=None,
            discrepancy=None,
            adiabatic_ok=None,
            pole_ok=None,
            broadness_ok=None,
            error=str(exc),
        )


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[SweepRow]:
    """Evaluate every point; rows in input order.

    Parallelism is across points only — each point's arithmetic is
    sequential — so results do not depend on the thread count.
    """
    if threads < 1:
        raise ConfigurationError(f"threads must be >= 1, got {threads}")
    if threads == 1 or len(spec.values) == 1:
        rows = [_evaluate_point(spec, v) for v in spec.values]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_evaluate_point, spec, v) for v in spec.values]
            rows = [f.result() for f in futures]
    if all(r.error is not None for r in rows):
        reasons = "; ".join(
            f"{spec.axis}={csv_num(r.value)}: {r.error}" for r in rows
        )
        raise SweepError(f"every sweep point failed: {reasons}")
    return rows


def _flag_cell(flag: bool | None) -> str:
    return "" if flag is None else ("true" if flag else "false")


def write_sweep_csv(rows: Sequence[SweepRow], spec: SweepSpec, fh) -> None:
    """Flattened rows: axis value, tau, per-path folded orders, checks."""
    writer = csv.writer(fh, lineterminator="\n")
    header = [spec.axis, "tau"]
    for path in spec.paths:
        header.extend(f"{path}_P_{q}" for q in range(spec.q_max + 1))
    header.extend(["discrepancy", "adiabatic_ok", "pole_ok", "broadness_ok", "error"])
    writer.writerow(header)
    for row in rows:
        cells = [csv_num(row.value)]
        if row.error is not None:
            cells.append("")
            cells.extend("" for _ in range(len(spec.paths) * (spec.q_max + 1)))
            cells.append("")
        else:
            cells.append(csv_num(row.tau))
            for path in spec.paths:
                cells.extend(csv_num(p) for p in row.patterns[path].folded())
            cells.append(csv_num(row.discrepancy))
        cells.extend(
            _flag_cell(f) for f in (row.adiabatic_ok, row.pole_ok, row.broadness_ok)
        )
        cells.append(row.error or "")
        writer.writerow(cells)


def sweep_report(spec: SweepSpec, rows: Sequence[SweepRow], meta: dict) -> dict:
    """JSON-shaped report: spec echo, per-point rows, summary, run meta."""
    spec_echo = {
        "axis": spec.axis,
        "values": list(spec.values),
        "paths": list(spec.paths),
        "q_max": spec.q_max,
        "grid_points": spec.grid_points,
        "z_steps": spec.z_steps,
        "box_lambdas": spec.box_lambdas,
        "base_units": "cgs",
        "base": params_to_system(spec.base, "cgs"),
    }
    row_dicts = []
    for row in rows:
        if row.error is not None:
            row_dicts.append({"value": row.value, "error": row.error})
            continue
        orders = {}
        for path in spec.paths:
            pat = row.patterns[path]
            orders[path] = {str(q): pat.orders[q] for q in sorted(pat.orders)}
        row_dicts.append(
            {
                "value": row.value,
                "tau": row.tau,
                "orders": orders,
                "discrepancy": row.discrepancy,
                "flags": {
                    "adiabatic": row.adiabatic_ok,
                    "pole_distance": row.pole_ok,
                    "w_y_broadness": row.broadness_ok,
                },
            }
        )
    valid_count = sum(1 for r in rows if r.valid())
    discrepancies = [r.discrepancy for r in rows if r.discrepancy is not None]
    summary = {
        "n_points": len(rows),
        "n_valid": valid_count,
        "n_failed": sum(1 for r in rows if r.error is not None),
        "max_discrepancy": max(discrepancies) if discrepancies else None,
    }
    return {"spec": spec_echo, "rows": row_dicts, "summary": summary, "meta": meta}
