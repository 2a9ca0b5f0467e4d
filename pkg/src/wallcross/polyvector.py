"""Polyvector fields in the log-derivations ``d_i = z_i d/dz_i`` and the
Floer-side classes ``z^gamma * g_I`` they correspond to.

Sign conventions (fixed jointly, see ``tests/test_polyvector.py``):

* wedge monomials are stored on sorted index tuples; sorting a concatenation
  contributes the sign of the permutation.
* contraction with a one-form acts on the first slot:
  ``i_{dW}(d_{i1} ^ ... ^ d_{ip}) = sum_k (-1)^(k-1) d_{ik}(W) d_{I - ik}``.
* ``[f P, g Q] = (-1)^(p-1) f i_{dg}(P) ^ Q - g P ^ i_{df}(Q)`` for constant
  wedges ``P``, ``Q`` of degrees ``p``, ``q``.
* the Floer bracket
  ``{z^a A, z^b B} = z^(a+b) (A ^ i_a B + (-1)^|A| i_b A ^ B)``
  is carried to ``-[., .]`` by :func:`correspondence`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .laurent import LaurentPoly, format_z_monomial, poly_sort_key
from .novikov import (
    INF,
    NovikovScalar,
    ParameterTable,
    check_same_table,
    format_coefficient_factors,
    format_param_monomial,
    join_signed,
)


def merge_indices(a: tuple[int, ...], b: tuple[int, ...]):
    """Sign and sorted union of ``a + b``; ``(0, None)`` on a repeated index."""
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1) ** inversions, tuple(sorted(a + b))


def _sorted_index_key(I):
    return (len(I), I)


class PolyVectorField:
    """Graded sum ``sum_I f_I d_I`` with Laurent coefficients.

    ``components`` maps a strictly increasing tuple of 1-based indices to a
    nonzero :class:`LaurentPoly`.
    """

    __slots__ = ("n", "table", "components")

    def __init__(self, n: int, table: ParameterTable, components: Mapping | None = None):
        self.n = n
        self.table = table
        comps = {}
        for I, f in (components or {}).items():
            I = tuple(I)
            if list(I) != sorted(set(I)) or any(not 1 <= i <= n for i in I):
                raise ValueError(f"index set {I} must be strictly increasing within 1..{n}")
            if not isinstance(f, LaurentPoly):
                f = LaurentPoly.constant(n, table, f)
            if f.n != n:
                raise ValueError("coefficient has the wrong number of coordinates")
            check_same_table(table, f.table)
            if f:
                comps[I] = f
        self.components = comps

    @classmethod
    def _raw(cls, n, table, comps):
        obj = cls.__new__(cls)
        obj.n = n
        obj.table = table
        obj.components = comps
        return obj

    @classmethod
    def zero(cls, n, table):
        return cls._raw(n, table, {})

    @classmethod
    def function(cls, f: LaurentPoly) -> "PolyVectorField":
        return cls._raw(f.n, f.table, {(): f} if f else {})

    @classmethod
    def basis(cls, n, table, *indices: int, coeff=None) -> "PolyVectorField":
        """``coeff * d_{i1} ^ d_{i2} ^ ...`` in the given (not necessarily sorted) order."""
        sign, I = 1, ()
        for i in indices:
            s, I = merge_indices(I, (i,))
            if not s:
                return cls.zero(n, table)
            sign *= s
        f = LaurentPoly.constant(n, table, 1) if coeff is None else coeff
        return cls(n, table, {I: f * sign})

    # structure --------------------------------------------------------------

    def _check(self, other: "PolyVectorField"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        check_same_table(self.table, other.table)

    def __bool__(self):
        return bool(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def degrees(self) -> set[int]:
        return {len(I) for I in self.components}

    def homogeneous(self, degree: int) -> "PolyVectorField":
        return PolyVectorField._raw(self.n, self.table, {I: f for I, f in self.components.items() if len(I) == degree})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError(f"not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def coefficient(self, *indices) -> LaurentPoly:
        return self.components.get(tuple(indices), LaurentPoly.zero(self.n, self.table))

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            other = PolyVectorField.function(other)
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.n == other.n and self.table == other.table and self.components == other.components

    def __hash__(self):
        return hash(frozenset(self.components.items()))

    # linear structure ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            other = PolyVectorField.function(other)
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        self._check(other)
        out = dict(self.components)
        for I, f in other.components.items():
            s = out[I] + f if I in out else f
            if s:
                out[I] = s
            else:
                out.pop(I, None)
        return PolyVectorField._raw(self.n, self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyVectorField._raw(self.n, self.table, {I: -f for I, f in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Multiply coefficients by a function or scalar."""
        if isinstance(other, PolyVectorField):
            return self.wedge(other)
        if isinstance(other, (int, Fraction, NovikovScalar, LaurentPoly)):
            out = {}
            for I, f in self.components.items():
                g = f * other
                if g:
                    out[I] = g
            return PolyVectorField._raw(self.n, self.table, out)
        return NotImplemented

    __rmul__ = __mul__

    def map_coefficients(self, fn) -> "PolyVectorField":
        out = {}
        for I, f in self.components.items():
            g = fn(f)
            if g:
                out[I] = g
        return PolyVectorField._raw(self.n, self.table, out)

    def truncate(self, cutoff) -> "PolyVectorField":
        if cutoff == INF:
            return self
        return self.map_coefficients(lambda f: f.truncate(cutoff))

    def kill(self, pexp) -> "PolyVectorField":
        return self.map_coefficients(lambda f: f.kill(pexp))

    def valuation(self):
        return min((f.valuation() for f in self.components.values()), default=INF)

    def leading(self) -> "PolyVectorField":
        v = self.valuation()
        if v == INF:
            return self
        return self.map_coefficients(lambda f: f.leading() if f.valuation() == v else LaurentPoly.zero(f.n, f.table))

    # exterior algebra ----------------------------------------------------------

    def wedge(self, other: "PolyVectorField") -> "PolyVectorField":
        self._check(other)
        out: dict = {}
        for I, f in self.components.items():
            for J, g in other.components.items():
                sign, K = merge_indices(I, J)
                if not sign:
                    continue
                term = f * g
                if sign < 0:
                    term = -term
                s = out[K] + term if K in out else term
                if s:
                    out[K] = s
                else:
                    out.pop(K, None)
        return PolyVectorField._raw(self.n, self.table, out)

    def __xor__(self, other):
        return self.wedge(other)

    def contract(self, df: list[LaurentPoly]) -> "PolyVectorField":
        """Contract with the one-form whose ``d_i`` component is ``df[i-1]``."""
        out: dict = {}
        for I, f in self.components.items():
            for k, i in enumerate(I):
                g = df[i - 1]
                if not g:
                    continue
                term = f * g
                if k % 2:
                    term = -term
                J = I[:k] + I[k + 1:]
                s = out[J] + term if J in out else term
                if s:
                    out[J] = s
                else:
                    out.pop(J, None)
        return PolyVectorField._raw(self.n, self.table, out)

    def __repr__(self):
        return f"PolyVectorField({format_polyvector(self)})"

    def __str__(self):
        return format_polyvector(self)


def gradient(W: LaurentPoly) -> list[LaurentPoly]:
    return [W.log_derivative(i) for i in range(1, W.n + 1)]


def wedge(P: PolyVectorField, Q: PolyVectorField) -> PolyVectorField:
    return P.wedge(Q)


def interior_dW(W: LaurentPoly, P: PolyVectorField) -> PolyVectorField:
    """``i_{dW}(P)``; lowers degree by one and kills functions."""
    if W.n != P.n:
        raise ValueError("dimension mismatch")
    return P.contract(gradient(W))


def apply_vector_field(X: PolyVectorField, f: LaurentPoly) -> LaurentPoly:
    """Derivative of ``f`` along the degree-one part of ``X``."""
    out = LaurentPoly.zero(f.n, f.table)
    for I, c in X.components.items():
        if len(I) == 1:
            out = out + c * f.log_derivative(I[0])
    return out


def schouten(P: PolyVectorField, Q: PolyVectorField, cutoff=INF) -> PolyVectorField:
    """Schouten-Nijenhuis bracket, of degree -1, dropping terms of valuation ``>= cutoff``."""
    P._check(Q)
    dP = {I: gradient(f) for I, f in P.components.items() if Q.components}
    dQ = {J: gradient(g) for J, g in Q.components.items() if P.components}
    acc: dict = {}

    def add(K, term):
        s = acc[K] + term if K in acc else term
        if s:
            acc[K] = s
        else:
            acc.pop(K, None)

    for I, f in P.components.items():
        p = len(I)
        for J, g in Q.components.items():
            # (-1)^(p-1) f i_{dg}(d_I) ^ d_J
            for k, i in enumerate(I):
                dg = dQ[J][i - 1]
                if not dg:
                    continue
                sign, K = merge_indices(I[:k] + I[k + 1:], J)
                if not sign:
                    continue
                sign *= (-1) ** (p - 1 + k)
                add(K, f.mul_trunc(dg, cutoff) * sign)
            # - g d_I ^ i_{df}(d_J)
            for l, j in enumerate(J):
                df = dP[I][j - 1]
                if not df:
                    continue
                sign, K = merge_indices(I, J[:l] + J[l + 1:])
                if not sign:
                    continue
                sign *= -((-1) ** l)
                add(K, g.mul_trunc(df, cutoff) * sign)
    return PolyVectorField._raw(P.n, P.table, acc)


# ---------------------------------------------------------------------------
# Floer side


class FloerClass:
    """Finite sum of ``c * z^gamma * g_{i1} ^ ... ^ g_{ik}``.

    ``terms`` maps ``(gamma, I)`` to a nonzero :class:`NovikovScalar`, where
    ``gamma`` is an integer vector in ``H_1`` and ``I`` a sorted index tuple of
    dual basis elements ``g_i``.
    """

    __slots__ = ("n", "table", "terms")

    def __init__(self, n: int, table: ParameterTable, terms: Mapping | None = None):
        self.n = n
        self.table = table
        clean = {}
        for (gamma, I), c in (terms or {}).items():
            gamma, I = tuple(gamma), tuple(I)
            if len(gamma) != n:
                raise ValueError(f"gamma {gamma} does not have length {n}")
            if list(I) != sorted(set(I)) or any(not 1 <= i <= n for i in I):
                raise ValueError(f"index set {I} must be strictly increasing within 1..{n}")
            if not isinstance(c, NovikovScalar):
                c = NovikovScalar.constant(table, c)
            check_same_table(table, c.table)
            if c:
                key = (gamma, I)
                s = clean[key] + c if key in clean else c
                if s:
                    clean[key] = s
                else:
                    clean.pop(key)
        self.terms = clean

    @classmethod
    def term(cls, n, table, gamma, indices=(), coeff=1) -> "FloerClass":
        """``coeff * z^gamma * g_{indices[0]} ^ g_{indices[1]} ^ ...``"""
        sign, I = 1, ()
        for i in indices:
            s, I = merge_indices(I, (i,))
            if not s:
                return cls(n, table)
            sign *= s
        c = coeff if isinstance(coeff, NovikovScalar) else NovikovScalar.constant(table, coeff)
        return cls(n, table, {(tuple(gamma), I): c * sign})

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        check_same_table(self.table, other.table)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FloerClass):
            return NotImplemented
        return self.n == other.n and self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out[k] + c if k in out else c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FloerClass(self.n, self.table, out)

    def __neg__(self):
        return FloerClass(self.n, self.table, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction, NovikovScalar)):
            return FloerClass(self.n, self.table, {k: v * c for k, v in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def degrees(self) -> set[int]:
        return {len(I) for _, I in self.terms}

    def __repr__(self):
        return f"FloerClass({format_floer(self)})"

    def __str__(self):
        return format_floer(self)


def _contract_indices(gamma, I):
    """Signed contraction of ``g_I`` by ``gamma``: list of ``(coefficient, I - i)``."""
    out = []
    for k, i in enumerate(I):
        a = gamma[i - 1]
        if a:
            out.append(((-1) ** k * a, I[:k] + I[k + 1:]))
    return out


def iota_gamma(gamma, a: FloerClass) -> FloerClass:
    """Contract every exterior factor with ``gamma``; ``z^gamma'`` factors are untouched."""
    gamma = tuple(gamma)
    if len(gamma) != a.n:
        raise ValueError("gamma has the wrong length")
    out: dict = {}
    for (g, I), c in a.terms.items():
        for s, J in _contract_indices(gamma, I):
            key = (g, J)
            out[key] = out[key] + c * s if key in out else c * s
    return FloerClass(a.n, a.table, out)


def hf_bracket(a: FloerClass, b: FloerClass) -> FloerClass:
    """Degree -1 bracket ``{z^g A, z^h B} = z^(g+h) (A ^ i_g B + (-1)^|A| i_h A ^ B)``."""
    a._check(b)
    out: dict = {}

    def add(key, c):
        out[key] = out[key] + c if key in out else c

    for (g, I), c in a.terms.items():
        for (h, J), d in b.terms.items():
            gh = tuple(x + y for x, y in zip(g, h))
            cd = c * d
            for s, J2 in _contract_indices(g, J):
                sign, K = merge_indices(I, J2)
                if sign:
                    add((gh, K), cd * (s * sign))
            for s, I2 in _contract_indices(h, I):
                sign, K = merge_indices(I2, J)
                if sign:
                    add((gh, K), cd * (s * sign * (-1) ** len(I)))
    return FloerClass(a.n, a.table, out)


def correspondence(a: FloerClass) -> PolyVectorField:
    """Relabel ``z^gamma g_I`` as ``z^gamma d_I``."""
    comps: dict = {}
    for (g, I), c in a.terms.items():
        mono = LaurentPoly.monomial(a.n, a.table, g, c)
        comps[I] = comps[I] + mono if I in comps else mono
    return PolyVectorField(a.n, a.table, comps)


def floer_from_polyvector(P: PolyVectorField) -> FloerClass:
    """Inverse of :func:`correspondence` on canonical forms."""
    terms: dict = {}
    for I, f in P.components.items():
        for zexp, c in f.terms.items():
            terms[(zexp, I)] = c
    return FloerClass(P.n, P.table, terms)


# ---------------------------------------------------------------------------
# printing


def _wedge_text(I, letter):
    return "^".join(f"{letter}{i}" for i in I)


def _format_components(n, table, items, letter):
    parts = []
    for I, flat in items:
        for (zexp, pexp), c in sorted(flat, key=lambda kc: poly_sort_key(table, kc[0])):
            factors = format_param_monomial(table, pexp) + format_z_monomial(zexp)
            if I:
                factors.append(_wedge_text(I, letter))
            parts.append(format_coefficient_factors(c, factors))
    return join_signed(parts) if parts else "0"


def format_polyvector(P: PolyVectorField) -> str:
    items = [(I, list(P.components[I].flat_terms())) for I in sorted(P.components, key=_sorted_index_key)]
    return _format_components(P.n, P.table, items, "d")


def format_floer(a: FloerClass) -> str:
    P = correspondence(a)
    items = [(I, list(P.components[I].flat_terms())) for I in sorted(P.components, key=_sorted_index_key)]
    return _format_components(a.n, a.table, items, "g")
