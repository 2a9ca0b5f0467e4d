"""The worked examples: disc classes, chamber assembly and the three diagrams."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from .laurent import LaurentPoly, Substitution
from .novikov import ParameterTable
from .parser import parse_expression, parse_polyvector
from .polyvector import PolyVectorField
from .scattering import Cell, ScatteringDiagram, Symmetry, Wall

MAIN_WEIGHTS = {"q": 1, "qp": Fraction(2, 3), "qpp": Fraction(3, 4)}
COMPACT_WEIGHTS = {**MAIN_WEIGHTS, "q1": 3, "q2": 3, "q4": 2}
DEFAULT_CUTOFF = Fraction(20)
CHARTS = ("--", "-+", "+-", "++")


def main_table(**weights) -> ParameterTable:
    return ParameterTable({**MAIN_WEIGHTS, **weights})


def compact_table(**weights) -> ParameterTable:
    return ParameterTable({**COMPACT_WEIGHTS, **weights})


# ---------------------------------------------------------------------------
# disc classes


@dataclass(frozen=True)
class DiscClass:
    """Degrees of a stable disc: Blaschke degrees ``n1..n4`` of the disc
    component, its contact orders ``k0``, ``kinf`` with the two exceptional
    divisors, and the multiplicity ``m`` of the sphere ``S_(1,1)``."""

    n1: int = 0
    n2: int = 0
    n3: int = 0
    n4: int = 0
    k0: int = 0
    kinf: int = 0
    m: int = 0

    def __post_init__(self):
        for name in ("n1", "n2", "n3", "n4", "k0", "kinf", "m"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def N1(self):
        return self.n1

    @property
    def N2(self):
        return self.n2

    @property
    def N34(self):
        return self.n3 + self.n4

    # S_(1,1) meets both exceptional divisors once per unit of multiplicity
    @property
    def K0(self):
        return self.k0 + self.m

    @property
    def Kinf(self):
        return self.kinf + self.m


def maslov_index(c: DiscClass) -> int:
    """``2 (n1 + n2 + n3 + n4 - k0 - kinf) - 4 m``.

    For ``m = 0`` this is the disc-component formula; with only ``n4`` and
    ``m`` nonzero it reduces to ``2 n4 - 4 m``.
    """
    return 2 * (c.n1 + c.n2 + c.n3 + c.n4 - c.k0 - c.kinf) - 4 * c.m


def satisfies_contact_bounds(c: DiscClass) -> bool:
    return c.K0 <= min(c.N2, c.N34) and c.Kinf <= min(c.N1, c.N34)


def maslov_lower_bound(c: DiscClass) -> int:
    return 2 * max(c.N1, c.N2, c.N34)


def enumerate_classes(max_entry: int = 3):
    for vals in product(range(max_entry + 1), repeat=7):
        yield DiscClass(*vals)


# ---------------------------------------------------------------------------
# chambers and the superpotential tables


@dataclass(frozen=True)
class Chamber:
    """Signs of ``r1 - 1`` and ``r2 - 1``."""

    s1: str
    s2: str

    def __post_init__(self):
        if self.s1 not in "+-" or self.s2 not in "+-" or len(self.s1) != 1 or len(self.s2) != 1:
            raise ValueError(f"chamber signs must be '+' or '-', got {self.s1!r}, {self.s2!r}")

    @classmethod
    def parse(cls, label: str) -> "Chamber":
        if len(label) != 2:
            raise ValueError(f"chamber label must be two signs, got {label!r}")
        return cls(label[0], label[1])

    @property
    def label(self) -> str:
        return self.s1 + self.s2

    @property
    def r1_big(self) -> bool:
        return self.s1 == "+"

    @property
    def r2_big(self) -> bool:
        return self.s2 == "+"


@dataclass(frozen=True)
class Contribution:
    name: str
    group: str  # "no34", "only4", "only3"
    disc: DiscClass
    weight: str
    condition: Callable[[Chamber], bool] = field(compare=False)


def _always(ch):
    return True


CONTRIBUTIONS = (
    Contribution("beta1", "no34", DiscClass(n1=1), "z1", _always),
    Contribution("beta2", "no34", DiscClass(n2=1), "z2", _always),
    Contribution("beta4", "only4", DiscClass(n4=1), "z4", _always),
    Contribution("beta4+S", "only4", DiscClass(n4=1), "q^2*z4", _always),
    Contribution("beta1+beta4+S(1,x2)", "only4", DiscClass(n1=1, n4=1, kinf=1), "q*qpp*z1*z4", lambda ch: ch.r1_big),
    Contribution("beta2+beta4+S(x1,1)", "only4", DiscClass(n2=1, n4=1, k0=1), "q*qp*z2*z4", lambda ch: ch.r2_big),
    Contribution(
        "beta1+beta2+beta4+S(1,1)", "only4", DiscClass(n1=1, n2=1, n4=1, m=1), "qp*qpp*z1*z2*z4",
        lambda ch: ch.r1_big and ch.r2_big,
    ),
    Contribution("beta3+", "only3", DiscClass(n3=1), "q*z3*z4", _always),
    Contribution("beta3-", "only3", DiscClass(n3=1), "q*z3^-1*z4", _always),
    Contribution("x1 disc through H_inf", "only3", DiscClass(n1=1, n3=1, kinf=1), "qpp*z1*z3^-1*z4", lambda ch: ch.r1_big),
    Contribution("x2 disc through H_0", "only3", DiscClass(n2=1, n3=1, k0=1), "qp*z2*z3*z4", lambda ch: ch.r2_big),
)


def contributions(ch: Chamber | str, group: str | None = None):
    ch = Chamber.parse(ch) if isinstance(ch, str) else ch
    return [c for c in CONTRIBUTIONS if c.condition(ch) and (group is None or c.group == group)]


def assemble_superpotential(ch: Chamber | str, table: ParameterTable | None = None) -> LaurentPoly:
    """Sum of the weights of all contributing Maslov-2 classes in the chamber."""
    table = table or main_table()
    total = LaurentPoly.zero(4, table)
    for c in contributions(ch):
        total = total + parse_expression(c.weight, table, 4)
    return total


# ---------------------------------------------------------------------------
# diagrams


@dataclass
class Ledger:
    w0: dict[str, PolyVectorField] = field(default_factory=dict)
    w1: dict[str, PolyVectorField] = field(default_factory=dict)
    w2: dict[str, PolyVectorField] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not (self.w0 or self.w1 or self.w2)

    def kill(self, pexp) -> "Ledger":
        def k(d):
            return {key: P.kill(pexp) for key, P in d.items() if P.kill(pexp)}

        return Ledger(k(self.w0), k(self.w1), k(self.w2))


@dataclass
class Example:
    name: str
    diagram: ScatteringDiagram
    ledger: Ledger
    expectations: dict[str, str]
    cutoff: Fraction = DEFAULT_CUTOFF


def _wall(name, src, tgt, table, images: dict[int, str]) -> Wall:
    sub = Substitution.from_images(4, table, {i: parse_expression(e, table, 4) for i, e in images.items()})
    return Wall(name, src, tgt, sub)


SQUARE = Cell("square", ("-0", "0+"), ("0-", "+0"))

_MAIN_W = {
    "--": "z1 + z2 + (1 + q^2 + q*z3 + q*z3^-1)*z4",
    "-+": "z1 + z2*(1 + q*qp*z4 + qp*z3*z4) + (1 + q^2 + q*z3 + q*z3^-1)*z4",
    "+-": "z1*(1 + q*qpp*z4 + qpp*z3^-1*z4) + z2 + (1 + q^2 + q*z3 + q*z3^-1)*z4",
    "++": "z1*(1 + q*qpp*z4 + qpp*z3^-1*z4) + z2*(1 + q*qp*z4 + qp*z3*z4) + qp*qpp*z1*z2*z4"
    " + (1 + q^2 + q*z3 + q*z3^-1)*z4",
}

_MAIN_WALLS = (
    ("-0", "--", "-+", {2: "z2*(1 + q*qp*z4 + qp*z3*z4)"}),
    ("+0", "+-", "++", {2: "z2*(1 + q*qp*z4 + qp*z3*z4 + qp*qpp*z1*z4)"}),
    ("0-", "--", "+-", {1: "z1*(1 + q*qpp*z4 + qpp*z3^-1*z4)"}),
    ("0+", "-+", "++", {1: "z1*(1 + q*qpp*z4 + qpp*z3^-1*z4 + qp*qpp*z2*z4)"}),
)

MAIN_DEFECT = "qp*qpp*z2*z4*d1 - qp*qpp*z1*z4*d2"
# i_{dW}(qp*qpp*z4*d1^d2) for W of the (--) chart: the negative of the cell defect
CURVATURE_LEADING = "-qp*qpp*z2*z4*d1 + qp*qpp*z1*z4*d2"


def build_main_example(table: ParameterTable | None = None) -> Example:
    """Four charts, four walls, one square cell and the deformation ledger."""
    table = table or main_table()
    charts = {k: parse_expression(v, table, 4) for k, v in _MAIN_W.items()}
    walls = [_wall(name, s, t, table, imgs) for name, s, t, imgs in _MAIN_WALLS]
    d = ScatteringDiagram(4, table, charts, walls, [SQUARE])
    pv = lambda s: parse_polyvector(s, table, 4)  # noqa: E731
    ledger = Ledger(
        w0={"++": pv("qp*qpp*z1*z2*z4")},
        w1={"+0": pv("qp*qpp*z1*z4*d2"), "0+": pv("qp*qpp*z2*z4*d1")},
        w2={"square": pv("qp*qpp*z4*d1^d2")},
    )
    expect = {
        "cell[square]": f"defect {MAIN_DEFECT}",
        "master[eq1]": "order > 17/12",
        "master[full]": "order > 17/12",
    }
    return Example("main", d, ledger, expect)


def build_open_mirror(table: ParameterTable | None = None) -> Example:
    """Walls of the mirror of the open complement; no superpotentials."""
    table = table or main_table()
    charts = {k: None for k in CHARTS}
    walls = [
        _wall("-0", "--", "-+", table, {2: "z2*(1 + qp*z3*z4)"}),
        _wall("+0", "+-", "++", table, {2: "z2*(1 + qp*z3*z4)"}),
        _wall("0-", "--", "+-", table, {1: "z1*(1 + qpp*z3^-1*z4)"}),
        _wall("0+", "-+", "++", table, {1: "z1*(1 + qpp*z3^-1*z4)"}),
    ]
    d = ScatteringDiagram(4, table, charts, walls, [SQUARE])
    return Example("open", d, Ledger(), {})


_TAIL = " + (1 + q^2 + q*z3 + q*z3^-1)*z4 + q4*z4^-1"
_COMPACT_W = {
    "--": "z1 + q1*z1^-1*(1 + q*qpp*z4 + qpp*z3^-1*z4) + z2 + q2*z2^-1*(1 + q*qp*z4 + qp*z3*z4)"
    " + q1*q2*qp*qpp*z1^-1*z2^-1*z4" + _TAIL,
    "-+": "z1 + q1*z1^-1*(1 + q*qpp*z4 + qpp*z3^-1*z4) + z2*(1 + q*qp*z4 + qp*z3*z4) + q2*z2^-1"
    " + q1*qp*qpp*z1^-1*z2*z4" + _TAIL,
    "+-": "z1*(1 + q*qpp*z4 + qpp*z3^-1*z4) + q1*z1^-1 + z2 + q2*z2^-1*(1 + q*qp*z4 + qp*z3*z4)"
    " + q2*qp*qpp*z1*z2^-1*z4" + _TAIL,
    "++": "z1*(1 + q*qpp*z4 + qpp*z3^-1*z4) + q1*z1^-1 + z2*(1 + q*qp*z4 + qp*z3*z4) + q2*z2^-1"
    " + qp*qpp*z1*z2*z4" + _TAIL,
}

_COMPACT_WALLS = (
    ("-0", "--", "-+", {2: "z2*(1 + q*qp*z4 + qp*z3*z4 + q1*qp*qpp*z1^-1*z4)"}),
    ("+0", "+-", "++", {2: "z2*(1 + q*qp*z4 + qp*z3*z4 + qp*qpp*z1*z4)"}),
    ("0-", "--", "+-", {1: "z1*(1 + q*qpp*z4 + qpp*z3^-1*z4 + q2*qp*qpp*z2^-1*z4)"}),
    ("0+", "-+", "++", {1: "z1*(1 + q*qpp*z4 + qpp*z3^-1*z4 + qp*qpp*z2*z4)"}),
)


def build_compact_example(table: ParameterTable | None = None) -> Example:
    table = table or compact_table()
    charts = {k: parse_expression(v, table, 4) for k, v in _COMPACT_W.items()}
    walls = [_wall(name, s, t, table, imgs) for name, s, t, imgs in _COMPACT_WALLS]
    symmetries = [
        Symmetry("z1flip", (("--", "+-"), ("-+", "++")), {1: parse_expression("q1*z1^-1", table, 4)}),
        Symmetry("z2flip", (("--", "-+"), ("+-", "++")), {2: parse_expression("q2*z2^-1", table, 4)}),
    ]
    d = ScatteringDiagram(4, table, charts, walls, [SQUARE], symmetries)
    # without a face ledger the curvature keeps the defect, up to sign, as its leading term
    expect = {
        "cell[square]": f"defect {MAIN_DEFECT}",
        "master[eq1]": f"defect {CURVATURE_LEADING}",
        "master[full]": f"defect {CURVATURE_LEADING}",
    }
    return Example("compact", d, Ledger(), expect)


BUILDERS = {
    "main": build_main_example,
    "open": build_open_mirror,
    "compact": build_compact_example,
}
