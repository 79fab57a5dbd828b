"""Measure-weighted aggregation of per-cell windings.

The numerical secondary index of a walk pairs the winding number of its
boundary loop with a product measure on the Cantor boundary: summed exactly
cell by cell (dyadic arithmetic under the uniform measure), or estimated by
seeded Monte Carlo sampling of boundary points.  Both routes require every
cell to carry an invertible loop (|a| != |p|); a degenerate cell aborts the
whole computation by name, since the index theorem's hypothesis is global.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cantor import Cylinder, Dyadic, ProductMeasure, cylinder_measure
from .symbol import SymbolLoop, SymbolSingularError, winding_quadrature, winding_residues
from .walk import SphereCoeff, WalkSpec


def map_ordered(fn, items, workers: int):
    """Map preserving order; a thread pool when workers > 1.

    The work items are pure functions of their inputs, so the result is
    identical for any worker count.
    """
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def classify_point(a: float, p: float) -> int:
    """Winding class of a boundary point: +1 for a > |p|, 0 for |a| < |p|,
    -1 for a < -|p|.  The boundary |a| = |p| is degenerate."""
    if abs(a) == abs(p):
        raise SymbolSingularError(f"degenerate point: |a| = |p| = {abs(a)}")
    if a > abs(p):
        return 1
    if a < -abs(p):
        return -1
    return 0


def loop_for_cell(w: WalkSpec, coeff: SphereCoeff) -> SymbolLoop:
    return SymbolLoop(a=coeff.a, b=coeff.b, p=w.p, q=w.q)


@dataclass(frozen=True)
class CellWinding:
    prefix: str
    winding: int
    measure: float

    def to_json(self) -> dict:
        return {"prefix": self.prefix, "winding": self.winding, "measure": self.measure}


@dataclass(frozen=True)
class IndexReport:
    """Result of an index pairing: exact dyadic value (uniform measure only),
    float value, per-cell breakdown, and the cell classification counts."""

    mode: str
    numeric: float
    exact: Dyadic | None = None
    per_cell: tuple[CellWinding, ...] = ()
    classification_counts: dict = field(default_factory=dict)
    mc_stderr: float | None = None
    samples: int | None = None
    seed: int | None = None

    def to_json(self) -> str:
        doc = {
            "mode": self.mode,
            "numeric": self.numeric,
            "exact": self.exact.to_json() if self.exact is not None else None,
            "per_cell": [c.to_json() for c in self.per_cell],
            "classification_counts": self.classification_counts,
            "mc_stderr": self.mc_stderr,
            "samples": self.samples,
            "seed": self.seed,
        }
        return json.dumps(doc, sort_keys=True, indent=2)


def _checked_cell_windings(w: WalkSpec, workers: int = 1):
    def one(item):
        prefix, coeff = item
        try:
            return prefix, coeff, winding_residues(loop_for_cell(w, coeff))
        except SymbolSingularError:
            raise SymbolSingularError(
                f"cell {prefix!r} is degenerate: |a| = |p| = {abs(coeff.a)}",
                cell=prefix) from None

    return map_ordered(one, w.cells, workers)


def _classification_counts(windings) -> dict:
    return {
        "plus": sum(1 for v in windings if v == 1),
        "zero": sum(1 for v in windings if v == 0),
        "minus": sum(1 for v in windings if v == -1),
    }


def s_index_exact(w: WalkSpec, m: ProductMeasure, workers: int = 1) -> IndexReport:
    """Exact pairing: sum over cells of winding times cell measure.

    Windings come from the residue classification (integers, no quadrature
    error), so under the uniform measure the result is an exact dyadic
    rational; other product measures give a float.  The cell loop is data
    parallel; the summation is a fixed-order reduction either way.
    """
    cells = _checked_cell_windings(w, workers)
    per_cell = []
    numeric = 0.0
    exact: Dyadic | None = Dyadic(0, 0) if m.kind == "uniform" else None
    for prefix, _, winding in cells:
        mu = cylinder_measure(m, Cylinder(prefix))
        per_cell.append(CellWinding(prefix, winding, float(mu)))
        numeric += winding * float(mu)
        if exact is not None:
            exact = exact + mu * winding
    if exact is not None:
        numeric = float(exact)
    return IndexReport(
        mode="exact",
        numeric=numeric,
        exact=exact,
        per_cell=tuple(per_cell),
        classification_counts=_classification_counts([c.winding for c in per_cell]),
    )


def s_index_montecarlo(w: WalkSpec, m: ProductMeasure, samples: int, seed: int,
                       quadrature_samples: int = 4096, workers: int = 1) -> IndexReport:
    """Monte Carlo pairing: mean winding over boundary points drawn from m.

    Points are resolved lazily bit by bit, drawing only enough coordinates to
    land in a cell of the walk.  Each sampled point contributes the winding of
    its cell's loop computed by phase-unwrap quadrature and rounded to the
    nearest integer (the raw value is checked to sit within 1e-6 of it), so
    the estimator is an exact average of integers.  Deterministic for a fixed
    seed: the per-cell quadratures are precomputed (in parallel when workers
    > 1, with no effect on the values) and the bit stream is a single
    sequential generator, so the worker count never changes the report.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    checked = _checked_cell_windings(w, workers)

    def quadrature(item):
        prefix, coeff, _ = item
        raw = winding_quadrature(loop_for_cell(w, coeff), quadrature_samples)
        rounded = int(round(raw))
        if abs(raw - rounded) > 1e-6:
            raise SymbolSingularError(
                f"quadrature winding {raw} for cell {prefix!r} is not close to an integer",
                cell=prefix)
        return prefix, rounded

    cell_winding = dict(map_ordered(quadrature, checked, workers))

    rng = np.random.default_rng(seed)
    hits = {prefix: 0 for prefix in cell_winding}
    values = np.empty(samples, dtype=float)
    max_level = w.max_level
    for i in range(samples):
        prefix = ""
        while prefix not in cell_winding:
            coordinate = len(prefix) + 1
            w0 = m.weight(coordinate, "0")
            prefix += "0" if rng.random() < w0 else "1"
            if len(prefix) > max_level:
                raise AssertionError("sampling escaped the cell partition")
        hits[prefix] += 1
        values[i] = cell_winding[prefix]

    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    per_cell = tuple(CellWinding(prefix, cell_winding[prefix], hits[prefix] / samples)
                     for prefix in sorted(cell_winding))
    sampled_counts = {
        "plus": int(np.count_nonzero(values == 1)),
        "zero": int(np.count_nonzero(values == 0)),
        "minus": int(np.count_nonzero(values == -1)),
    }
    return IndexReport(
        mode="mc",
        numeric=mean,
        exact=None,
        per_cell=per_cell,
        classification_counts=sampled_counts,
        mc_stderr=stderr,
        samples=samples,
        seed=seed,
    )
