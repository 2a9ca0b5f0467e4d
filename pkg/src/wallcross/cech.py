"""Cech cochains on a chart nerve with polyvector values.

The nerve has charts as vertices, walls as directed edges and 2-cells as
faces.  A face is two edge paths from a common *base* to a common *apex*;
its oriented boundary is the first path minus the second.

Products of cochains use the path-ordered Alexander-Whitney rule::

    (a u b)_v  = a_v b_v
    (a u B)_e  = a_src B_e            (A u b)_e = A_e b_tgt
    (a u C)_F  = a_base C_F           (C u b)_F = C_F b_apex
    (A u B)_F  = sum_{i<j on first path} A_ei B_ej  -  same on second path

with an arbitrary bilinear operation in place of the product of values.
Anything landing above Cech degree 2 is dropped.

The Lie degree of a component of Cech degree ``i`` and exterior degree ``j``
is ``i + j - 1``.  The bracket is the graded antisymmetrisation of
``B(a, b) = (-1)^((j_a - 1) i_b) (a u_[,] b)``; ``delta`` is a derivation
of it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .laurent import LaurentPoly
from .novikov import INF, ParameterTable, check_same_table
from .polyvector import PolyVectorField, interior_dW, schouten

MAX_DEGREE = 2


class DegreeOverflowWarning(UserWarning):
    """A nonzero product landed above the top degree of the nerve and was dropped."""


class NerveError(ValueError):
    pass


class Nerve:
    def __init__(
        self,
        vertices: Sequence[str],
        edges: Mapping[str, tuple[str, str]],
        faces: Mapping[str, tuple[Sequence[str], Sequence[str]]] | None = None,
    ):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise NerveError("duplicate vertex")
        self.edges = {}
        for name, (a, b) in edges.items():
            if a not in self.vertices or b not in self.vertices:
                raise NerveError(f"edge {name} has an endpoint outside the vertex set")
            self.edges[name] = (a, b)
        self.faces = {}
        self._ends = {}
        for name, (p1, p2) in (faces or {}).items():
            p1, p2 = tuple(p1), tuple(p2)
            e1, e2 = self._path_ends(name, p1), self._path_ends(name, p2)
            if e1 != e2:
                raise NerveError(f"face {name}: boundary is not a closed loop")
            self.faces[name] = (p1, p2)
            self._ends[name] = e1

    def _path_ends(self, face, path):
        if not path:
            raise NerveError(f"face {face}: empty boundary path")
        for e in path:
            if e not in self.edges:
                raise NerveError(f"face {face}: unknown edge {e}")
        for e, f in zip(path, path[1:]):
            if self.edges[e][1] != self.edges[f][0]:
                raise NerveError(f"face {face}: edges {e}, {f} are not consecutive")
        return self.edges[path[0]][0], self.edges[path[-1]][1]

    @classmethod
    def from_diagram(cls, d) -> "Nerve":
        edges = {w.name: (w.source, w.target) for w in d.walls.values()}
        faces = {c.name: (c.first, c.second) for c in d.cells.values()}
        return cls(list(d.charts), edges, faces)

    def base(self, face) -> str:
        return self._ends[face][0]

    def apex(self, face) -> str:
        return self._ends[face][1]

    def boundary(self, face) -> list[tuple[str, int]]:
        p1, p2 = self.faces[face]
        return [(e, 1) for e in p1] + [(e, -1) for e in p2]

    def cells_of_degree(self, i: int):
        return (self.vertices, tuple(self.edges), tuple(self.faces))[i] if 0 <= i <= MAX_DEGREE else ()

    def __eq__(self, other):
        if not isinstance(other, Nerve):
            return NotImplemented
        return (self.vertices, self.edges, self.faces) == (other.vertices, other.edges, other.faces)


def _add_value(store: dict, key, value: PolyVectorField):
    if key in store:
        value = store[key] + value
    if value:
        store[key] = value
    else:
        store.pop(key, None)


class CechCochain:
    """Polyvector values on vertices (degree 0), edges (1) and faces (2).

    ``values[i]`` maps a cell of Cech degree ``i`` to a (possibly
    inhomogeneous) :class:`PolyVectorField`.
    """

    __slots__ = ("nerve", "n", "table", "values")

    def __init__(self, nerve: Nerve, n: int, table: ParameterTable, values: Mapping[int, Mapping[str, object]] | None = None):
        self.nerve = nerve
        self.n = n
        self.table = table
        clean = {0: {}, 1: {}, 2: {}}
        for i, assignment in (values or {}).items():
            if i not in clean:
                raise NerveError(f"Cech degree {i} does not exist on this nerve")
            allowed = nerve.cells_of_degree(i)
            for cell, v in assignment.items():
                if cell not in allowed:
                    raise NerveError(f"{cell!r} is not a cell of Cech degree {i}")
                if isinstance(v, LaurentPoly):
                    v = PolyVectorField.function(v)
                if v.n != n:
                    raise ValueError("value has the wrong number of coordinates")
                check_same_table(table, v.table)
                _add_value(clean[i], cell, v)
        self.values = clean

    @classmethod
    def zero(cls, nerve, n, table):
        return cls(nerve, n, table)

    def _like(self, values) -> "CechCochain":
        obj = CechCochain.__new__(CechCochain)
        obj.nerve, obj.n, obj.table = self.nerve, self.n, self.table
        obj.values = {i: values.get(i, {}) for i in range(MAX_DEGREE + 1)}
        return obj

    def value(self, i: int, cell: str) -> PolyVectorField:
        return self.values[i].get(cell, PolyVectorField.zero(self.n, self.table))

    def __bool__(self):
        return any(self.values[i] for i in self.values)

    def is_zero(self) -> bool:
        return not bool(self)

    def __eq__(self, other):
        if not isinstance(other, CechCochain):
            return NotImplemented
        return self.nerve == other.nerve and self.values == other.values

    def __add__(self, other: "CechCochain") -> "CechCochain":
        out = {i: dict(v) for i, v in self.values.items()}
        for i, v in other.values.items():
            for cell, P in v.items():
                _add_value(out[i], cell, P)
        return self._like(out)

    def __neg__(self):
        return self._like({i: {c: -P for c, P in v.items()} for i, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return self.map_values(lambda P: P * c)

    __rmul__ = __mul__

    def map_values(self, fn) -> "CechCochain":
        out = {}
        for i, v in self.values.items():
            out[i] = {}
            for cell, P in v.items():
                Q = fn(P)
                if Q:
                    out[i][cell] = Q
        return self._like(out)

    def truncate(self, cutoff) -> "CechCochain":
        return self if cutoff == INF else self.map_values(lambda P: P.truncate(cutoff))

    def kill(self, pexp) -> "CechCochain":
        return self.map_values(lambda P: P.kill(pexp))

    def valuation(self):
        return min((P.valuation() for v in self.values.values() for P in v.values()), default=INF)

    def bidegree_part(self, i: int, j: int) -> "CechCochain":
        return self._like({i: {c: P.homogeneous(j) for c, P in self.values[i].items() if P.homogeneous(j)}})

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(i, j) for i, v in self.values.items() for P in v.values() for j in P.degrees()}

    def homogeneous_parts(self):
        """Yield ``((i, j), part)`` for every nonzero bidegree component."""
        for i, j in sorted(self.bidegrees()):
            yield (i, j), self.bidegree_part(i, j)

    def lie_degrees(self) -> set[int]:
        return {i + j - 1 for i, j in self.bidegrees()}

    def __repr__(self):
        parts = []
        for i, v in self.values.items():
            for cell, P in v.items():
                parts.append(f"[{i}:{cell}] {P}")
        return "CechCochain(" + "; ".join(parts) + ")"


def cech_delta(c: CechCochain) -> CechCochain:
    """``(dc)_{A->B} = c_B - c_A`` and ``(dc)_F = sum over the oriented boundary``."""
    nerve = c.nerve
    out = {0: {}, 1: {}, 2: {}}
    if c.values[0]:
        for e, (a, b) in nerve.edges.items():
            _add_value(out[1], e, c.value(0, b) - c.value(0, a))
    if c.values[1]:
        for F in nerve.faces:
            total = PolyVectorField.zero(c.n, c.table)
            for e, sign in nerve.boundary(F):
                total = total + c.value(1, e) * sign
            _add_value(out[2], F, total)
    return c._like(out)


def cup(a: CechCochain, b: CechCochain, op, cutoff=INF) -> CechCochain:
    """Path-ordered cup product with ``op`` combining the values."""
    nerve = a.nerve
    out = {0: {}, 1: {}, 2: {}}

    def put(i, cell, P):
        if cutoff != INF:
            P = P.truncate(cutoff)
        _add_value(out[i], cell, P)

    overflow = False
    av, bv = a.values, b.values
    for i in av:
        for j in bv:
            if not av[i] or not bv[j]:
                continue
            if i + j > MAX_DEGREE:
                overflow = True
                continue
            if (i, j) == (0, 0):
                for v in nerve.vertices:
                    if v in av[0] and v in bv[0]:
                        put(0, v, op(av[0][v], bv[0][v]))
            elif (i, j) == (0, 1):
                for e, (src, _) in nerve.edges.items():
                    if src in av[0] and e in bv[1]:
                        put(1, e, op(av[0][src], bv[1][e]))
            elif (i, j) == (1, 0):
                for e, (_, tgt) in nerve.edges.items():
                    if e in av[1] and tgt in bv[0]:
                        put(1, e, op(av[1][e], bv[0][tgt]))
            elif (i, j) == (0, 2):
                for F in nerve.faces:
                    base = nerve.base(F)
                    if base in av[0] and F in bv[2]:
                        put(2, F, op(av[0][base], bv[2][F]))
            elif (i, j) == (2, 0):
                for F in nerve.faces:
                    apex = nerve.apex(F)
                    if F in av[2] and apex in bv[0]:
                        put(2, F, op(av[2][F], bv[0][apex]))
            else:  # (1, 1)
                for F, paths in nerve.faces.items():
                    for sign, path in zip((1, -1), paths):
                        for k, e in enumerate(path):
                            if e not in av[1]:
                                continue
                            for f in path[k + 1:]:
                                if f in bv[1]:
                                    P = op(av[1][e], bv[1][f])
                                    put(2, F, P if sign > 0 else -P)
    if overflow:
        _warn_if_nonzero(a, b, op)
    return a._like(out)


def _warn_if_nonzero(a, b, op):
    # only complain when a dropped product would actually have been nonzero
    for i, v in a.values.items():
        for j, w in b.values.items():
            if i + j > MAX_DEGREE and v and w:
                if any(op(P, Q) for P in v.values() for Q in w.values()):
                    warnings.warn(
                        f"product of Cech degrees {i} and {j} exceeds the top degree {MAX_DEGREE}; dropped",
                        DegreeOverflowWarning,
                        stacklevel=3,
                    )
                    return


def wedge_cup(a: CechCochain, b: CechCochain, cutoff=INF) -> CechCochain:
    return cup(a, b, lambda P, Q: P.wedge(Q), cutoff)


def _raw_bracket(a: CechCochain, b: CechCochain, cutoff=INF) -> CechCochain:
    """``B(a, b)`` for homogeneous ``a`` (bidegree ``(ia, ja)``) and ``b``."""
    (ia, ja), = a.bidegrees()
    (ib, _), = b.bidegrees()
    term = cup(a, b, lambda P, Q: schouten(P, Q, cutoff), cutoff)
    return -term if ((ja - 1) * ib) % 2 else term


def cup_bracket(a: CechCochain, b: CechCochain, cutoff=INF) -> CechCochain:
    """Graded antisymmetric bracket combining cup product and Schouten bracket.

    ``[a, b] = (B(a, b) - (-1)^(|a||b|) B(b, a)) / 2`` on homogeneous parts,
    with Lie degrees ``|c| = i + j - 1``.
    """
    parts_a = list(a.homogeneous_parts())
    parts_b = parts_a if b is a else list(b.homogeneous_parts())
    cache: dict = {}

    def raw(x, y, kx, ky, swapped):
        key = (kx, ky) if b is a else (swapped, kx, ky)
        if key not in cache:
            cache[key] = _raw_bracket(x, y, cutoff)
        return cache[key]

    total = CechCochain.zero(a.nerve, a.n, a.table)
    for ka, pa in parts_a:
        da = ka[0] + ka[1] - 1
        for kb, pb in parts_b:
            # overflowing pairs still go through cup(), which warns if anything is dropped
            db = kb[0] + kb[1] - 1
            forward = raw(pa, pb, ka, kb, False)
            backward = raw(pb, pa, kb, ka, True)
            if (da * db) % 2:
                total = total + (forward + backward) * Fraction(1, 2)
            else:
                total = total + (forward - backward) * Fraction(1, 2)
    return total


def contract_cochain(W0: CechCochain, c: CechCochain, convention: str = "source") -> CechCochain:
    """Apply ``i_{dW}`` cell by cell, taking ``W`` from the chart the convention selects."""
    nerve = c.nerve
    pick = _chart_picker(nerve, convention)
    out = {0: {}, 1: {}, 2: {}}
    for i, v in c.values.items():
        for cell, P in v.items():
            chart = pick(i, cell)
            W = W0.value(0, chart).coefficient()
            _add_value(out[i], cell, interior_dW(W, P))
    return c._like(out)


def _chart_picker(nerve: Nerve, convention: str):
    if convention == "source":
        return lambda i, cell: cell if i == 0 else (nerve.edges[cell][0] if i == 1 else nerve.base(cell))
    if convention == "target":
        return lambda i, cell: cell if i == 0 else (nerve.edges[cell][1] if i == 1 else nerve.apex(cell))
    raise ValueError(f"unknown chart convention {convention!r}; use 'source' or 'target'")


# ---------------------------------------------------------------------------
# reports


@dataclass
class Residual:
    kind: str  # "edge", "face", "vertex"
    location: str
    value: PolyVectorField

    @property
    def valuation(self):
        return self.value.valuation()

    def is_zero(self) -> bool:
        return self.value.is_zero()


@dataclass
class LedgerReport:
    convention: str
    residuals: list[Residual] = field(default_factory=list)

    def holds(self) -> bool:
        return all(r.is_zero() for r in self.residuals)

    @property
    def valuation(self):
        return min((r.valuation for r in self.residuals), default=INF)

    def residual(self, location: str) -> Residual:
        for r in self.residuals:
            if r.location == location:
                return r
        raise KeyError(location)


def superpotential_cochain(d) -> CechCochain:
    """Degree-0 cochain of chart superpotentials."""
    nerve = Nerve.from_diagram(d)
    vals = {label: W for label, W in d.charts.items() if W is not None}
    return CechCochain(nerve, d.n, d.table, {0: vals})


def check_hochschild_ledger(d, w0, w1, w2, convention: str = "source") -> LedgerReport:
    """Edge residuals ``(dw0)_e - i_{dW}(w1_e)`` and face residuals ``(dw1)_F + i_{dW}(w2_F)``.

    ``w0``, ``w1``, ``w2`` map vertices, edges and faces to polyvector
    fields (missing entries are zero).  The face sign reflects the boundary
    orientation first-path-minus-second-path.
    """
    nerve = Nerve.from_diagram(d)
    ledger = CechCochain(nerve, d.n, d.table, {0: w0 or {}, 1: w1 or {}, 2: w2 or {}})
    W0 = superpotential_cochain(d)
    delta = cech_delta(ledger)
    contracted = contract_cochain(W0, ledger, convention)
    report = LedgerReport(convention)
    for e in nerve.edges:
        report.residuals.append(Residual("edge", e, delta.value(1, e) - contracted.value(1, e)))
    for F in nerve.faces:
        report.residuals.append(Residual("face", F, delta.value(2, F) + contracted.value(2, F)))
    return report


@dataclass
class MasterReport:
    curvature: CechCochain
    eq0: CechCochain
    eq1: CechCochain
    eq2: CechCochain

    def component(self, name: str) -> CechCochain:
        return {"full": self.curvature, "eq0": self.eq0, "eq1": self.eq1, "eq2": self.eq2}[name]

    def holds(self) -> bool:
        return self.curvature.is_zero()


def master_curvature(W: CechCochain, cutoff=INF) -> CechCochain:
    """``dW + [W, W] / 2`` truncated at ``cutoff``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegreeOverflowWarning)
        bracket = cup_bracket(W, W, cutoff)
    return (cech_delta(W) + bracket * Fraction(1, 2)).truncate(cutoff)


def check_master(W: CechCochain, cutoff=INF) -> MasterReport:
    """Full curvature and its components by bidegree.

    ``eq0`` is the (1, 0) part, ``(d + [W1, .]) W0``; ``eq1`` the (2, 1) part,
    ``dW1 + [W1, W1]/2 + [W2, W0]``; ``eq2`` the (3, 2) part, which lives
    above the top degree of a 2-dimensional nerve and is therefore zero.
    """
    curv = master_curvature(W, cutoff)
    eq0 = curv.bidegree_part(1, 0)
    eq1 = curv.bidegree_part(2, 1)
    eq2 = CechCochain.zero(W.nerve, W.n, W.table)
    return MasterReport(curv, eq0, eq1, eq2)


def twisted_differential(W: CechCochain, x: CechCochain, cutoff=INF) -> CechCochain:
    """``(d + [W, .]) x``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegreeOverflowWarning)
        return (cech_delta(x) + cup_bracket(W, x, cutoff)).truncate(cutoff)


@dataclass
class WeakReport:
    violations: list[tuple[int, str, int]]

    def holds(self) -> bool:
        return not self.violations


def check_weak_unobstructed(c: CechCochain) -> WeakReport:
    """Every component must sit in bidegree ``(i, i)``."""
    bad = []
    for i, v in c.values.items():
        for cell, P in v.items():
            for j in sorted(P.degrees()):
                if j != i:
                    bad.append((i, cell, j))
    return WeakReport(bad)


def cayley_generator(u: LaurentPoly, cutoff) -> LaurentPoly:
    """``2u / (2 + u)`` expanded as ``u * sum (-u/2)^k`` up to ``cutoff``."""
    if u.valuation() <= 0:
        raise ValueError("wall unit must be 1 + (positive valuation)")
    half = u * Fraction(-1, 2)
    total = LaurentPoly.zero(u.n, u.table)
    term = u
    while not term.is_zero():
        total = total + term
        term = term.mul_trunc(half, cutoff)
    return total.truncate(cutoff)


def wall_cochain(d, cutoff) -> CechCochain:
    """Degree-1 cochain ``-sum_k c(u_k) d_k`` for walls ``z_k -> z_k (1 + u_k)``.

    ``c`` is the Cayley generator, the choice that makes
    ``W_B - W_A`` equal the bracket term exactly when ``W_A`` is linear in the
    moved coordinate and ``u_k`` does not involve it.
    """
    nerve = Nerve.from_diagram(d)
    one = LaurentPoly.constant(d.n, d.table, 1)
    vals = {}
    for w in d.walls.values():
        s = w.substitution
        if any(s.matrix[i][j] != int(i == j) for i in range(d.n) for j in range(d.n)):
            raise ValueError(f"wall {w.name} changes monomials; no infinitesimal generator")
        field_ = PolyVectorField.zero(d.n, d.table)
        for k, unit in enumerate(s.units, start=1):
            u = unit - one
            if u:
                field_ = field_ - PolyVectorField.basis(d.n, d.table, k, coeff=cayley_generator(u, cutoff))
        vals[w.name] = field_
    return CechCochain(nerve, d.n, d.table, {1: vals})


def assemble_master_cochain(d, w2: Mapping[str, PolyVectorField] | None, cutoff) -> CechCochain:
    """``W = W0 + W1 + W2`` from superpotentials, walls and the face ledger."""
    W0 = superpotential_cochain(d)
    W1 = wall_cochain(d, cutoff)
    W2 = CechCochain(W0.nerve, d.n, d.table, {2: w2 or {}})
    return W0 + W1 + W2
