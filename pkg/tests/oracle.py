"""Independent sympy oracle: Laurent polynomials as rational expressions."""

from functools import lru_cache

import sympy as sp

Z = sp.symbols("z1:9")


def params(table):
    return [sp.Symbol(name) for name in table.names]


def to_sympy(f):
    ps = params(f.table)
    terms = []
    for (zexp, pexp), c in f.flat_terms():
        factors = [sp.Rational(c.numerator, c.denominator)]
        factors += [z**e for z, e in zip(Z, zexp) if e]
        factors += [p**e for p, e in zip(ps, pexp) if e]
        terms.append(sp.Mul(*factors))
    return sp.Add(*terms)


def from_text(text, table, n=4):
    """Parse with sympy directly (``^`` means power), bypassing the package parser."""
    names = {f"z{i}": Z[i - 1] for i in range(1, n + 1)}
    names.update({p.name: p for p in params(table)})
    return sp.sympify(text.replace("^", "**"), locals=names)


def valuation(expr, table):
    """Minimum parameter weight over the terms of an expanded Laurent expression."""
    expr = sp.expand(expr)
    if expr == 0:
        return float("inf")
    ps = params(table)
    weights = [table.weights[p.name] for p in ps]
    best = None
    for term in sp.Add.make_args(expr):
        powers = term.as_powers_dict()
        v = sum(w * int(powers.get(p, 0)) for p, w in zip(ps, weights))
        best = v if best is None else min(best, v)
    return best


def is_zero_rational(expr):
    return sp.simplify(sp.together(expr)) == 0


def truncate(expr, table, cutoff):
    """Drop terms of parameter valuation ``>= cutoff``."""
    ps = params(table)
    weights = [table.weights[p.name] for p in ps]
    keep = []
    for term in sp.Add.make_args(sp.expand(expr)):
        powers = term.as_powers_dict()
        if sum(w * int(powers.get(p, 0)) for p, w in zip(ps, weights)) < cutoff:
            keep.append(term)
    return sp.Add(*keep)


def unit_power(u, e, table, cutoff):
    """``u**e`` for a unit ``u = 1 + (positive valuation)``, as a truncated series."""
    if e >= 0:
        out = sp.Integer(1)
        for _ in range(e):
            out = truncate(out * u, table, cutoff)
        return out
    x = sp.expand(u - 1)
    inv, term = sp.Integer(1), sp.Integer(1)
    while True:
        term = truncate(-term * x, table, cutoff)
        if term == 0:
            break
        inv += term
    return unit_power(inv, -e, table, cutoff)


def substitute(expr, units, table, cutoff):
    """Apply ``z_j -> z_j * units[j]`` to a Laurent expression, truncating at ``cutoff``."""
    out = sp.Integer(0)
    for term in sp.Add.make_args(sp.expand(expr)):
        powers = term.as_powers_dict()
        t = term
        for j, u in units.items():
            e = int(powers.get(Z[j - 1], 0))
            if e:
                t = truncate(t * unit_power(u, e, table, cutoff), table, cutoff)
        out += t
    return truncate(out, table, cutoff)


@lru_cache(maxsize=None)
def parse_cached(text, table):
    """sympify once per (text, table); golden files are large."""
    names = {f"z{i}": Z[i - 1] for i in range(1, len(Z) + 1)}
    names.update({p.name: p for p in params(table)})
    return sp.sympify(text, locals=names)
