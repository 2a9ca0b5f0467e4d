"""Sparse Laurent polynomials over Novikov scalars, and admissible substitutions.

Coordinates are numbered ``1..n`` in the public API (``z1``, ``z2``, ...).
Internally a polynomial is a flat map ``(z_exponents, param_exponents) ->
Fraction``; :attr:`LaurentPoly.terms` regroups it by ``z`` monomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .novikov import (
    INF,
    NovikovScalar,
    ParameterTable,
    as_fraction,
    check_same_table,
    format_coefficient_factors,
    format_param_monomial,
    join_signed,
)


class InexactPullbackError(ValueError):
    """An exact pullback was requested but a geometric series is needed."""


def _add_into(out: dict, key, c):
    s = out.get(key, 0) + c
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class LaurentPoly:
    __slots__ = ("n", "table", "_t", "_grouped")

    def __init__(self, n: int, table: ParameterTable, terms: Mapping | None = None):
        """Build from ``{z_exponents: coefficient}`` where the coefficient is a
        :class:`NovikovScalar` or a rational number."""
        self.n = n
        self.table = table
        self._grouped = None
        flat: dict = {}
        zero_p = table.zero_exps()
        for zexp, c in (terms or {}).items():
            zexp = tuple(int(e) for e in zexp)
            if len(zexp) != n:
                raise ValueError(f"exponent vector {zexp} does not have length {n}")
            if isinstance(c, NovikovScalar):
                check_same_table(table, c.table)
                for pexp, a in c.terms.items():
                    _add_into(flat, (zexp, pexp), a)
            else:
                c = as_fraction(c)
                if c:
                    _add_into(flat, (zexp, zero_p), c)
        self._t = flat

    @classmethod
    def _raw(cls, n, table, flat):
        obj = cls.__new__(cls)
        obj.n = n
        obj.table = table
        obj._t = flat
        obj._grouped = None
        return obj

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n, table):
        return cls._raw(n, table, {})

    @classmethod
    def constant(cls, n, table, c=1):
        if isinstance(c, NovikovScalar):
            return cls(n, table, {(0,) * n: c})
        c = as_fraction(c)
        return cls._raw(n, table, {((0,) * n, table.zero_exps()): c} if c else {})

    @classmethod
    def monomial(cls, n, table, zexp, coeff=1):
        return cls(n, table, {tuple(zexp): coeff})

    @classmethod
    def variable(cls, n, table, i: int, power: int = 1):
        if not 1 <= i <= n:
            raise IndexError(f"coordinate z{i} out of range 1..{n}")
        e = [0] * n
        e[i - 1] = power
        return cls.monomial(n, table, e)

    @classmethod
    def param(cls, n, table, name: str, power: int = 1):
        return cls(n, table, {(0,) * n: NovikovScalar.monomial(table, 1, **{name: power})})

    # structure ------------------------------------------------------------

    @property
    def terms(self) -> dict:
        """``{z_exponents: NovikovScalar}`` view of the polynomial."""
        if self._grouped is None:
            grouped: dict = {}
            for (zexp, pexp), c in self._t.items():
                grouped.setdefault(zexp, {})[pexp] = c
            self._grouped = {z: NovikovScalar._raw(self.table, d) for z, d in grouped.items()}
        return self._grouped

    def flat_terms(self):
        return self._t.items()

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def _check(self, other: "LaurentPoly"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        check_same_table(self.table, other.table)

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, NovikovScalar)):
            return LaurentPoly.constant(self.n, self.table, other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, NovikovScalar)):
            other = LaurentPoly.constant(self.n, self.table, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.n == other.n and self.table == other.table and self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._t)
        for k, c in other._t.items():
            _add_into(out, k, c)
        return LaurentPoly._raw(self.n, self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.n, self.table, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            if not c:
                return LaurentPoly.zero(self.n, self.table)
            return LaurentPoly._raw(self.n, self.table, {k: a * c for k, a in self._t.items()})
        return self.mul_trunc(self._coerce(other), INF)

    __rmul__ = __mul__

    def mul_trunc(self, other: "LaurentPoly", cutoff=INF) -> "LaurentPoly":
        """Product keeping only terms of valuation ``< cutoff``."""
        self._check(other)
        out: dict = {}
        if cutoff == INF:
            for (z1, p1), c1 in self._t.items():
                for (z2, p2), c2 in other._t.items():
                    key = (tuple(a + b for a, b in zip(z1, z2)), tuple(a + b for a, b in zip(p1, p2)))
                    _add_into(out, key, c1 * c2)
            return LaurentPoly._raw(self.n, self.table, out)
        cutoff = as_fraction(cutoff)
        val = self.table.exponent_valuation
        left = [(z, p, c, val(p)) for (z, p), c in self._t.items()]
        right = [(z, p, c, val(p)) for (z, p), c in other._t.items()]
        right.sort(key=lambda t: t[3])
        for z1, p1, c1, v1 in left:
            if v1 >= cutoff:
                continue
            for z2, p2, c2, v2 in right:
                if v1 + v2 >= cutoff:
                    break
                key = (tuple(a + b for a, b in zip(z1, z2)), tuple(a + b for a, b in zip(p1, p2)))
                _add_into(out, key, c1 * c2)
        return LaurentPoly._raw(self.n, self.table, out)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative powers exist only for monomials")
            ((zexp, pexp), c), = self._t.items()
            if any(pexp):
                raise ValueError("parameters have no inverses in the Novikov ring used here")
            return LaurentPoly._raw(self.n, self.table, {(tuple(e * k for e in zexp), pexp): c ** k})
        result = LaurentPoly.constant(self.n, self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    # valuation ------------------------------------------------------------

    def valuation(self):
        """Least Novikov valuation among the coefficients (``inf`` if zero)."""
        if not self._t:
            return INF
        val = self.table.exponent_valuation
        return min(val(p) for _, p in self._t)

    def truncate(self, cutoff) -> "LaurentPoly":
        if cutoff == INF:
            return self
        cutoff = as_fraction(cutoff)
        val = self.table.exponent_valuation
        return LaurentPoly._raw(self.n, self.table, {k: c for k, c in self._t.items() if val(k[1]) < cutoff})

    def leading(self) -> "LaurentPoly":
        """Terms whose coefficient valuation is minimal."""
        if not self._t:
            return self
        v = self.valuation()
        val = self.table.exponent_valuation
        return LaurentPoly._raw(self.n, self.table, {k: c for k, c in self._t.items() if val(k[1]) == v})

    def kill(self, pexp: tuple[int, ...]) -> "LaurentPoly":
        """Delete every term whose parameter monomial is divisible by ``pexp``."""
        return LaurentPoly._raw(
            self.n, self.table,
            {k: c for k, c in self._t.items() if not all(a >= b for a, b in zip(k[1], pexp))},
        )

    def with_table(self, table: ParameterTable) -> "LaurentPoly":
        if table.names != self.table.names:
            raise ValueError("parameter names differ")
        return LaurentPoly._raw(self.n, table, dict(self._t))

    # calculus / substitution ---------------------------------------------

    def log_derivative(self, i: int) -> "LaurentPoly":
        """Apply ``z_i d/dz_i``: each monomial ``z^v`` picks up the factor ``v_i``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"coordinate index {i} out of range 1..{self.n}")
        j = i - 1
        return LaurentPoly._raw(
            self.n, self.table, {k: c * k[0][j] for k, c in self._t.items() if k[0][j]}
        )

    def shift(self, zexp) -> "LaurentPoly":
        """Multiply by the monomial ``z^zexp``."""
        return LaurentPoly._raw(
            self.n, self.table,
            {(tuple(a + b for a, b in zip(z, zexp)), p): c for (z, p), c in self._t.items()},
        )

    def divide_by_monomial(self, zexp) -> "LaurentPoly":
        return self.shift(tuple(-e for e in zexp))

    def substitute_monomials(self, images: Mapping[int, "LaurentPoly"]) -> "LaurentPoly":
        """Substitute ``z_i -> images[i]`` where each image is a single monomial.

        Exact for any integer exponents, since monomials in ``z`` are units.
        Parameters may cancel along the way (``q1 z1^-1`` under
        ``z1 -> q1 z1^-1``), but every parameter exponent of the result
        must be non-negative.
        """
        imgs = []
        for i in range(1, self.n + 1):
            img = images.get(i, LaurentPoly.variable(self.n, self.table, i))
            self._check(img)
            if not img.is_monomial():
                raise ValueError(f"image of z{i} is not a monomial")
            ((z, p), c), = img._t.items()
            imgs.append((z, p, c))
        out: dict = {}
        for (zexp, pexp), c in self._t.items():
            new_z = [0] * self.n
            new_p = list(pexp)
            for e, (z, p, a) in zip(zexp, imgs):
                if e:
                    new_z = [x + e * y for x, y in zip(new_z, z)]
                    new_p = [x + e * y for x, y in zip(new_p, p)]
                    c = c * a ** e
            if any(x < 0 for x in new_p):
                raise ValueError("substitution leaves a negative power of a parameter")
            _add_into(out, (tuple(new_z), tuple(new_p)), c)
        return LaurentPoly._raw(self.n, self.table, out)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def lp_add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f + g


def lp_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def lp_eq(f: LaurentPoly, g: LaurentPoly) -> bool:
    f._check(g)
    return f == g


def log_derivative(f: LaurentPoly, i: int) -> LaurentPoly:
    return f.log_derivative(i)


def format_z_monomial(zexp) -> list[str]:
    out = []
    for i, e in enumerate(zexp, start=1):
        if e == 1:
            out.append(f"z{i}")
        elif e:
            out.append(f"z{i}^{e}")
    return out


def poly_sort_key(table: ParameterTable, key):
    zexp, pexp = key
    return (table.exponent_valuation(pexp), tuple(-e for e in pexp), sum(abs(e) for e in zexp), tuple(-e for e in zexp))


def format_poly(f: LaurentPoly) -> str:
    """Canonical text form accepted back by the expression parser."""
    if not f._t:
        return "0"
    parts = []
    for key in sorted(f._t, key=lambda k: poly_sort_key(f.table, k)):
        zexp, pexp = key
        factors = format_param_monomial(f.table, pexp) + format_z_monomial(zexp)
        parts.append(format_coefficient_factors(f._t[key], factors))
    return join_signed(parts)


# ---------------------------------------------------------------------------
# substitutions


def _integer_det(m: Sequence[Sequence[int]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


class Substitution:
    """Coordinate change ``z_i -> z^(row i of matrix) * units[i]``.

    ``matrix`` must be unimodular and every unit must be ``1 + u`` with every
    term of ``u`` of strictly positive valuation.
    """

    __slots__ = ("n", "table", "matrix", "units")

    def __init__(self, n: int, table: ParameterTable, matrix=None, units=None):
        self.n = n
        self.table = table
        if matrix is None:
            matrix = [[int(i == j) for j in range(n)] for i in range(n)]
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("monomial part must be an n x n matrix")
        if abs(_integer_det(matrix)) != 1:
            raise ValueError("monomial part is not unimodular")
        self.matrix = matrix
        one = LaurentPoly.constant(n, table, 1)
        if units is None:
            units = {}
        if not isinstance(units, Mapping):
            units = dict(enumerate(units, start=1))
        full = []
        for i in range(1, n + 1):
            u = units.get(i, one)
            if u.n != n:
                raise ValueError("unit part has wrong dimension")
            check_same_table(table, u.table)
            rest = u - one
            for (zexp, pexp), c in rest.flat_terms():
                if table.exponent_valuation(pexp) <= 0:
                    raise ValueError(
                        f"unit part of z{i} is not 1 + (positive valuation): offending term {c} at {zexp}"
                    )
            full.append(u)
        self.units = tuple(full)

    @classmethod
    def identity(cls, n, table):
        return cls(n, table)

    @classmethod
    def from_images(cls, n, table, images: Mapping[int, LaurentPoly]) -> "Substitution":
        """Factor each image as ``z^m (1 + u)``; the monomial is the unique
        valuation-zero term, which must have coefficient 1."""
        matrix = [[int(i == j) for j in range(n)] for i in range(n)]
        units = {}
        for i, img in images.items():
            if not 1 <= i <= n:
                raise IndexError(f"coordinate z{i} out of range")
            lead = [(z, p, c) for (z, p), c in img.flat_terms() if table.exponent_valuation(p) == 0]
            if len(lead) != 1 or lead[0][2] != 1:
                raise ValueError(
                    f"image of z{i} must contain exactly one valuation-zero term with coefficient 1"
                )
            zexp = lead[0][0]
            matrix[i - 1] = list(zexp)
            units[i] = img.divide_by_monomial(zexp)
        return cls(n, table, matrix, units)

    def image(self, i: int) -> LaurentPoly:
        return self.units[i - 1].shift(self.matrix[i - 1])

    def images(self) -> dict[int, LaurentPoly]:
        return {i: self.image(i) for i in range(1, self.n + 1)}

    def is_identity(self) -> bool:
        ident = all(self.matrix[i][j] == int(i == j) for i in range(self.n) for j in range(self.n))
        return ident and all(u == 1 for u in self.units)

    def moved(self) -> list[int]:
        """Coordinates whose image is not ``z_i`` itself."""
        return [i for i in range(1, self.n + 1) if self.image(i) != LaurentPoly.variable(self.n, self.table, i)]

    def kill(self, pexp) -> "Substitution":
        one = LaurentPoly.constant(self.n, self.table, 1)
        units = {i: one + (u - one).kill(pexp) for i, u in enumerate(self.units, start=1)}
        return Substitution(self.n, self.table, self.matrix, units)

    def truncate(self, cutoff) -> "Substitution":
        return Substitution(self.n, self.table, self.matrix, {i: u.truncate(cutoff) for i, u in enumerate(self.units, 1)})

    def __eq__(self, other):
        if not isinstance(other, Substitution):
            return NotImplemented
        return self.n == other.n and self.table == other.table and self.matrix == other.matrix and self.units == other.units

    def __hash__(self):
        return hash((self.matrix, self.units))

    def __repr__(self):
        body = ", ".join(f"z{i} -> {format_poly(self.image(i))}" for i in self.moved())
        return f"Substitution({body or 'identity'})"


class _PowerCache:
    """Truncated powers ``(1+u)^k`` of one unit part."""

    def __init__(self, unit: LaurentPoly, cutoff):
        self.unit = unit
        self.cutoff = cutoff
        self.one = LaurentPoly.constant(unit.n, unit.table, 1)
        self.trivial = unit == self.one
        self.pos = {0: self.one}
        self.neg = {0: self.one}
        self._inverse = None

    def inverse(self) -> LaurentPoly:
        if self._inverse is None:
            if self.cutoff == INF:
                raise InexactPullbackError(
                    "exact pullback requested, but a negative power of a non-trivial unit needs a geometric series"
                )
            minus_u = self.one - self.unit
            total = self.one
            term = self.one
            while True:
                term = term.mul_trunc(minus_u, self.cutoff)
                if term.is_zero():
                    break
                total = total + term
            self._inverse = total
        return self._inverse

    def power(self, k: int) -> LaurentPoly:
        if self.trivial:
            return self.one
        table = self.pos if k >= 0 else self.neg
        base = self.unit if k >= 0 else self.inverse()
        m = abs(k)
        top = max(table)
        while top < m:
            table[top + 1] = table[top].mul_trunc(base, self.cutoff)
            top += 1
        return table[m]


def pullback(f: LaurentPoly, sigma: Substitution, cutoff=INF) -> LaurentPoly:
    """Substitute ``sigma`` into ``f``.

    Negative powers of unit parts become geometric series truncated at
    ``cutoff``; with ``cutoff=inf`` that case raises
    :class:`InexactPullbackError`.  The result is truncated at ``cutoff``.
    """
    f._check(LaurentPoly.zero(sigma.n, sigma.table))
    if cutoff != INF:
        cutoff = as_fraction(cutoff)
    caches = [_PowerCache(u, cutoff) for u in sigma.units]
    n, table = f.n, f.table
    out: dict = {}
    for (zexp, pexp), c in f.flat_terms():
        new_z = [0] * n
        for i, e in enumerate(zexp):
            if e:
                row = sigma.matrix[i]
                for j in range(n):
                    new_z[j] += e * row[j]
        term = LaurentPoly._raw(n, table, {(tuple(new_z), pexp): c})
        for i, e in enumerate(zexp):
            if e and not caches[i].trivial:
                term = term.mul_trunc(caches[i].power(e), cutoff)
        for k, a in term.flat_terms():
            _add_into(out, k, a)
    return LaurentPoly._raw(n, table, out).truncate(cutoff)


def compose(sigma: Substitution, tau: Substitution, cutoff=INF) -> Substitution:
    """Substitution ``rho`` with ``pullback(f, rho) == pullback(pullback(f, sigma), tau)``.

    As maps of points this is ``sigma o tau``: ``tau`` acts first.
    """
    if sigma.n != tau.n:
        raise ValueError(f"dimension mismatch: {sigma.n} vs {tau.n}")
    check_same_table(sigma.table, tau.table)
    n = sigma.n
    matrix = [[sum(sigma.matrix[i][k] * tau.matrix[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    units = {}
    for i in range(1, n + 1):
        img = pullback(sigma.image(i), tau, cutoff)
        units[i] = img.divide_by_monomial(matrix[i - 1])
    return Substitution(n, sigma.table, matrix, units)
