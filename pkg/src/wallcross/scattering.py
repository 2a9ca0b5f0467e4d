"""Charts, walls and 2-cells, with gluing, cocycle and symmetry checks.

Orientation conventions:

* a wall ``A -> B`` carries a substitution ``phi`` with
  ``pullback(W_A, phi) == W_B``.
* a path is a list of wall names in traversal order; its composite
  ``rho`` satisfies ``pullback(f, rho) == pullback(...pullback(f, w1)..., wk)``,
  which as a map of points is ``w1 o w2 o ... o wk``.
* a cell is two paths with common endpoints; its defect is the first
  composite minus the second, coordinate by coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .laurent import LaurentPoly, Substitution, compose, pullback
from .novikov import INF, ParameterTable, check_same_table
from .polyvector import PolyVectorField


class DiagramError(ValueError):
    pass


class NoDefectError(ValueError):
    """Raised when a defect field is requested from a consistent cell."""


@dataclass(frozen=True)
class Wall:
    name: str
    source: str
    target: str
    substitution: Substitution


@dataclass(frozen=True)
class Cell:
    name: str
    first: tuple[str, ...]
    second: tuple[str, ...]


@dataclass(frozen=True)
class Symmetry:
    """Monomial substitution expected to carry ``W_A`` to ``W_B`` for each pair."""

    name: str
    pairs: tuple[tuple[str, str], ...]
    images: Mapping[int, LaurentPoly]


class ScatteringDiagram:
    def __init__(
        self,
        n: int,
        table: ParameterTable,
        charts: Mapping[str, LaurentPoly | None],
        walls: Sequence[Wall] = (),
        cells: Sequence[Cell] = (),
        symmetries: Sequence[Symmetry] = (),
    ):
        self.n = n
        self.table = table
        self.charts = dict(charts)
        for label, W in self.charts.items():
            if W is not None:
                if W.n != n:
                    raise DiagramError(f"superpotential of chart {label} has {W.n} coordinates, expected {n}")
                check_same_table(table, W.table)
        self.walls: dict[str, Wall] = {}
        for w in walls:
            if w.name in self.walls:
                raise DiagramError(f"duplicate wall {w.name}")
            for end in (w.source, w.target):
                if end not in self.charts:
                    raise DiagramError(f"wall {w.name} refers to undeclared chart {end}")
            if w.substitution.n != n:
                raise DiagramError(f"wall {w.name} acts on the wrong number of coordinates")
            check_same_table(table, w.substitution.table)
            self.walls[w.name] = w
        self.cells: dict[str, Cell] = {}
        for c in cells:
            if c.name in self.cells:
                raise DiagramError(f"duplicate cell {c.name}")
            a = self.path_endpoints(c.first)
            b = self.path_endpoints(c.second)
            if a != b:
                raise DiagramError(f"cell {c.name}: paths run {a[0]}->{a[1]} and {b[0]}->{b[1]}")
            self.cells[c.name] = c
        self.symmetries: dict[str, Symmetry] = {}
        for s in symmetries:
            for pair in s.pairs:
                for end in pair:
                    if end not in self.charts:
                        raise DiagramError(f"symmetry {s.name} refers to undeclared chart {end}")
            self.symmetries[s.name] = s

    def __eq__(self, other):
        if not isinstance(other, ScatteringDiagram):
            return NotImplemented
        return (self.n, self.table, self.charts, self.walls, self.cells, self.symmetries) == (
            other.n, other.table, other.charts, other.walls, other.cells, other.symmetries
        )

    __hash__ = None

    def path_endpoints(self, path: Sequence[str]) -> tuple[str, str]:
        if not path:
            raise DiagramError("empty path has no endpoints")
        walls = [self.wall(name) for name in path]
        for w, nxt in zip(walls, walls[1:]):
            if w.target != nxt.source:
                raise DiagramError(f"path is disconnected between {w.name} ({w.target}) and {nxt.name} ({nxt.source})")
        return walls[0].source, walls[-1].target

    def wall(self, name: str) -> Wall:
        try:
            return self.walls[name]
        except KeyError:
            raise DiagramError(f"unknown wall {name!r}") from None

    def cell(self, name: str) -> Cell:
        try:
            return self.cells[name]
        except KeyError:
            raise DiagramError(f"unknown cell {name!r}") from None

    def superpotential(self, chart: str) -> LaurentPoly | None:
        return self.charts[chart]

    def map_content(self, poly_fn, sub_fn) -> "ScatteringDiagram":
        charts = {k: (None if W is None else poly_fn(W)) for k, W in self.charts.items()}
        walls = [Wall(w.name, w.source, w.target, sub_fn(w.substitution)) for w in self.walls.values()]
        return ScatteringDiagram(self.n, self.table, charts, walls, self.cells.values(), self.symmetries.values())


def compose_path(d: ScatteringDiagram, path: Sequence[str], cutoff=INF) -> Substitution:
    """Composite substitution of a wall path given in traversal order."""
    if not path:
        return Substitution.identity(d.n, d.table)
    d.path_endpoints(path)
    result = d.wall(path[0]).substitution
    for name in path[1:]:
        result = compose(result, d.wall(name).substitution, cutoff)
    return result


@dataclass
class DefectReport:
    cell: str
    residuals: dict[int, LaurentPoly]
    cutoff: object = INF
    first: Substitution | None = field(default=None, repr=False)
    second: Substitution | None = field(default=None, repr=False)

    @property
    def leading_valuation(self):
        return min((r.valuation() for r in self.residuals.values()), default=INF)

    def is_consistent(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())

    @property
    def defect_field(self) -> PolyVectorField | None:
        try:
            return defect_as_field(self)
        except NoDefectError:
            return None


def check_cell(d: ScatteringDiagram, cell: str | Cell, cutoff=INF) -> DefectReport:
    """Compare the two composites around a cell (first minus second)."""
    c = d.cell(cell) if isinstance(cell, str) else cell
    rho1 = compose_path(d, c.first, cutoff)
    rho2 = compose_path(d, c.second, cutoff)
    residuals = {}
    for i in range(1, d.n + 1):
        residuals[i] = (rho1.image(i) - rho2.image(i)).truncate(cutoff)
    return DefectReport(c.name, residuals, cutoff, rho1, rho2)


def defect_as_field(report: DefectReport) -> PolyVectorField:
    """Leading-valuation part of ``sum_i (residual_i / z_i) d_i``."""
    if report.is_consistent():
        raise NoDefectError(f"cell {report.cell} has no defect")
    v = report.leading_valuation
    if v == 0:
        raise DiagramError(
            f"cell {report.cell}: the two composites differ already at valuation 0, "
            "so the defect is not an infinitesimal vector field"
        )
    n = len(report.residuals)
    comps = {}
    for i, r in report.residuals.items():
        if r.valuation() == v:
            e = [0] * n
            e[i - 1] = 1
            comps[(i,)] = r.leading().divide_by_monomial(e)
    first = next(iter(comps.values()))
    return PolyVectorField(n, first.table, comps)


def set_parameter_to_zero(d: ScatteringDiagram, pexp: Sequence[int]) -> ScatteringDiagram:
    """Delete every term divisible by the parameter monomial ``pexp``."""
    pexp = tuple(pexp)
    if len(pexp) != len(d.table) or not any(pexp) or any(e < 0 for e in pexp):
        raise ValueError(f"{pexp} is not a parameter monomial for {d.table!r}")
    return d.map_content(lambda W: W.kill(pexp), lambda s: s.kill(pexp))


@dataclass
class GluingReport:
    wall: str
    residual: LaurentPoly
    cutoff: object = INF

    @property
    def valuation(self):
        return self.residual.valuation()

    def holds(self) -> bool:
        return self.residual.is_zero()


def check_gluing(d: ScatteringDiagram, wall: str, cutoff=INF) -> GluingReport:
    """Residual ``pullback(W_source, phi) - W_target``, truncated at ``cutoff``."""
    w = d.wall(wall)
    Wa, Wb = d.charts[w.source], d.charts[w.target]
    if Wa is None or Wb is None:
        raise DiagramError(f"wall {wall}: both charts need a superpotential")
    residual = pullback(Wa, w.substitution, cutoff) - Wb.truncate(cutoff)
    return GluingReport(wall, residual, cutoff)


@dataclass
class SymmetryReport:
    symmetry: str
    residuals: dict[tuple[str, str], LaurentPoly]

    @property
    def valuation(self):
        return min((r.valuation() for r in self.residuals.values()), default=INF)

    def holds(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())


def check_symmetry(d: ScatteringDiagram, name: str) -> SymmetryReport:
    """Exact check that the monomial substitution carries each ``W_A`` to ``W_B``."""
    s = d.symmetries[name]
    residuals = {}
    for a, b in s.pairs:
        Wa, Wb = d.charts[a], d.charts[b]
        if Wa is None or Wb is None:
            raise DiagramError(f"symmetry {name}: charts {a}, {b} need superpotentials")
        residuals[(a, b)] = Wa.substitute_monomials(s.images) - Wb
    return SymmetryReport(name, residuals)

