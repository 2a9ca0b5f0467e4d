"""Recompute tests/golden/compact.json with the sympy series oracle in tests/oracle.py."""

import json
import sys
from pathlib import Path

import sympy as sp

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracle  # noqa: E402
from wallcross.catalog import _COMPACT_W, _COMPACT_WALLS, compact_table  # noqa: E402

CUTOFF = 20
T = compact_table()


def units():
    out = {}
    for name, _, _, images in _COMPACT_WALLS:
        (i, text), = images.items()
        out[name] = {i: sp.expand(oracle.from_text(text, T) / oracle.Z[i - 1])}
    return out


def path_image(path, i, walls):
    expr = oracle.Z[i - 1]
    # traversal order: the first wall substitutes first, later walls act on the result
    for name in path:
        expr = oracle.substitute(expr, walls[name], T, CUTOFF)
    return expr


def main():
    walls = units()
    first, second = ("-0", "0+"), ("0-", "+0")
    cell = {}
    for i in range(1, 5):
        r = sp.expand(path_image(first, i, walls) - path_image(second, i, walls))
        cell[f"z{i}"] = str(r)
    gluing = {}
    for name, src, tgt, _ in _COMPACT_WALLS:
        Wa, Wb = oracle.from_text(_COMPACT_W[src], T), oracle.from_text(_COMPACT_W[tgt], T)
        exact = sp.together(Wa.subs({oracle.Z[j - 1]: oracle.Z[j - 1] * u for j, u in walls[name].items()}) - Wb)
        gluing[name] = str(sp.simplify(exact))
    out = {"cutoff": CUTOFF, "cell_residuals": cell, "gluing_residuals": gluing}
    path = ROOT / "tests" / "golden" / "compact.json"
    path.parent.mkdir(exist_ok=True)
    path.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
