"""Exact arithmetic over the finitely generated Novikov parameter ring.

A :class:`NovikovScalar` is a polynomial in the area parameters (``q``,
``qp``, ``qpp``, ...) with rational coefficients.  Each parameter ``p`` stands
for ``T**w(p)`` where ``w(p) > 0`` is its weight in a :class:`ParameterTable`,
so every term has a well defined valuation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

INF = float("inf")


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or str")
    return Fraction(x)


class ParameterTable:
    """Ordered parameter names together with their (positive) Novikov weights."""

    __slots__ = ("names", "weights", "_index", "_wvec", "_vcache")

    def __init__(self, weights: Mapping[str, object] | Iterable[tuple[str, object]]):
        items = list(weights.items()) if isinstance(weights, Mapping) else list(weights)
        names = tuple(name for name, _ in items)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate parameter names in {names}")
        wvec = tuple(as_fraction(w) for _, w in items)
        for name, w in zip(names, wvec):
            if not name.isidentifier():
                raise ValueError(f"parameter name {name!r} is not an identifier")
            if w <= 0:
                raise ValueError(f"weight of {name!r} must be strictly positive, got {w}")
        self.names = names
        self._wvec = wvec
        self.weights = dict(zip(names, wvec))
        self._index = {name: i for i, name in enumerate(names)}
        self._vcache: dict = {}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ParameterTable):
            return NotImplemented
        return self.names == other.names and self._wvec == other._wvec

    def __hash__(self):
        return hash((self.names, self._wvec))

    def __repr__(self):
        inner = ", ".join(f"{n}={w}" for n, w in self.weights.items())
        return f"ParameterTable({inner})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown parameter {name!r}") from None

    def exponent_valuation(self, exps: tuple[int, ...]) -> Fraction:
        v = self._vcache.get(exps)
        if v is None:
            v = sum((w * e for w, e in zip(self._wvec, exps) if e), Fraction(0))
            self._vcache[exps] = v
        return v

    def with_weights(self, **updates) -> "ParameterTable":
        new = dict(self.weights)
        for k, v in updates.items():
            if k not in new:
                raise KeyError(f"unknown parameter {k!r}")
            new[k] = v
        return ParameterTable(new)

    def zero_exps(self) -> tuple[int, ...]:
        return (0,) * len(self.names)


def check_same_table(a: ParameterTable, b: ParameterTable):
    if a is not b and a != b:
        raise ValueError(f"mismatched parameter tables: {a!r} vs {b!r}")


class NovikovScalar:
    """Finite sum of parameter monomials with nonzero rational coefficients.

    ``terms`` maps a tuple of non-negative exponents (indexed like
    ``table.names``) to a nonzero :class:`~fractions.Fraction`.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: ParameterTable, terms: Mapping[tuple[int, ...], object] | None = None):
        self.table = table
        clean = {}
        if terms:
            n = len(table)
            for exps, c in terms.items():
                c = as_fraction(c)
                if not c:
                    continue
                exps = tuple(exps)
                if len(exps) != n or any(e < 0 for e in exps):
                    raise ValueError(f"bad parameter exponent vector {exps}")
                clean[exps] = c
        self.terms = clean

    @classmethod
    def _raw(cls, table, terms):
        obj = cls.__new__(cls)
        obj.table = table
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, table: ParameterTable, c=1) -> "NovikovScalar":
        return cls(table, {table.zero_exps(): c})

    @classmethod
    def zero(cls, table: ParameterTable) -> "NovikovScalar":
        return cls._raw(table, {})

    @classmethod
    def monomial(cls, table: ParameterTable, c=1, **powers) -> "NovikovScalar":
        exps = [0] * len(table)
        for name, e in powers.items():
            exps[table.index(name)] = e
        return cls(table, {tuple(exps): c})

    def _coerce(self, other) -> "NovikovScalar":
        if isinstance(other, NovikovScalar):
            check_same_table(self.table, other.table)
            return other
        if isinstance(other, (int, Fraction)):
            return NovikovScalar.constant(self.table, other)
        raise TypeError(f"cannot combine NovikovScalar with {type(other).__name__}")

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NovikovScalar.constant(self.table, other)
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return NovikovScalar._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return NovikovScalar._raw(self.table, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = as_fraction(other)
            if not other:
                return NovikovScalar.zero(self.table)
            return NovikovScalar._raw(self.table, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    del out[k]
        return NovikovScalar._raw(self.table, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers of Novikov scalars exist")
        result = NovikovScalar.constant(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def valuation(self):
        """Minimum weight over terms; ``inf`` for the zero scalar."""
        if not self.terms:
            return INF
        return min(self.table.exponent_valuation(k) for k in self.terms)

    def truncate(self, cutoff) -> "NovikovScalar":
        """Drop every term whose valuation is ``>= cutoff``."""
        if cutoff == INF:
            return self
        cutoff = as_fraction(cutoff)
        if cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        val = self.table.exponent_valuation
        return NovikovScalar._raw(self.table, {k: c for k, c in self.terms.items() if val(k) < cutoff})

    def leading(self) -> "NovikovScalar":
        """Terms of minimal valuation."""
        if not self.terms:
            return self
        v = self.valuation()
        val = self.table.exponent_valuation
        return NovikovScalar._raw(self.table, {k: c for k, c in self.terms.items() if val(k) == v})

    def is_constant(self) -> bool:
        return all(not any(k) for k in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.table.zero_exps(), Fraction(0))

    def divisible_by(self, exps: tuple[int, ...]) -> "NovikovScalar":
        """Terms whose exponent vector dominates ``exps``."""
        return NovikovScalar._raw(
            self.table,
            {k: c for k, c in self.terms.items() if all(a >= b for a, b in zip(k, exps))},
        )

    def __repr__(self):
        return f"NovikovScalar({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


def scalar_add(a: NovikovScalar, b: NovikovScalar) -> NovikovScalar:
    return a + b


def scalar_mul(a: NovikovScalar, b: NovikovScalar) -> NovikovScalar:
    return a * b


def valuation(a: NovikovScalar, table: ParameterTable | None = None):
    if table is not None and table != a.table:
        a = NovikovScalar(table, a.terms)
    return a.valuation()


def truncate(a: NovikovScalar, cutoff, table: ParameterTable | None = None) -> NovikovScalar:
    if table is not None and table != a.table:
        a = NovikovScalar(table, a.terms)
    return a.truncate(cutoff)


def format_param_monomial(table: ParameterTable, exps: tuple[int, ...]) -> list[str]:
    out = []
    for name, e in zip(table.names, exps):
        if e == 1:
            out.append(name)
        elif e:
            out.append(f"{name}^{e}")
    return out


def format_coefficient_factors(c: Fraction, factors: list[str]) -> str:
    """Render ``c * factors`` with the sign folded into the text."""
    sign = "-" if c < 0 else ""
    c = abs(c)
    if not factors:
        return sign + str(c)
    body = "*".join(factors)
    if c == 1:
        return sign + body
    return f"{sign}{c}*{body}"


def scalar_sort_key(table: ParameterTable, exps):
    return (table.exponent_valuation(exps), tuple(-e for e in exps))


def format_scalar(a: NovikovScalar) -> str:
    if not a.terms:
        return "0"
    parts = []
    for k in sorted(a.terms, key=lambda k: scalar_sort_key(a.table, k)):
        parts.append(format_coefficient_factors(a.terms[k], format_param_monomial(a.table, k)))
    return join_signed(parts)


def join_signed(parts: list[str]) -> str:
    text = parts[0]
    for p in parts[1:]:
        text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return text
