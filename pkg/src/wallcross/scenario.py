"""Scenario files, the check runner and report rendering.

A scenario is a line-oriented text file::

    # comment lines start with '#'
    [scenario]
    name = main
    coords = 4
    cutoff = 20

    [params]
    q = 1
    qp = 2/3

    [charts]
    -- = z1 + z2 + (1 + q^2 + q*z3 + q*z3^-1)*z4
    ++                      # a chart without superpotential

    [walls]
    -0 = -- -> -+ ; z2 := z2*(1 + q*qp*z4 + qp*z3*z4)

    [symmetries]
    z1flip = -- <-> +-, -+ <-> ++ ; z1 := q1*z1^-1

    [cells]
    square = -0 0+ | 0- +0

    [ledger]
    w0[++] = qp*qpp*z1*z2*z4
    w1[+0] = qp*qpp*z1*z4*d2
    w2[square] = qp*qpp*z4*d1^d2

    [expect]
    cell[square] = defect qp*qpp*z2*z4*d1 - qp*qpp*z1*z4*d2
    master[full] = order > 17/12

(The trailing remark on the ``++`` line is for illustration only; comments
must occupy a whole line.)  Expectations are ``pass``, ``defect``,
``defect <polyvector>`` (leading residual must equal it) or
``order > <rational>`` (residual, if any, has larger valuation).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .catalog import BUILDERS, DEFAULT_CUTOFF, Example, Ledger
from .cech import (
    CechCochain,
    Nerve,
    assemble_master_cochain,
    check_hochschild_ledger,
    check_master,
    check_weak_unobstructed,
)
from .laurent import InexactPullbackError, LaurentPoly, Substitution, format_poly
from .novikov import INF, ParameterTable, format_param_monomial
from .parser import ParseError, parse_expression, parse_param_monomial, parse_polyvector, parse_rational
from .polyvector import PolyVectorField, format_polyvector
from .scattering import (
    Cell,
    DiagramError,
    ScatteringDiagram,
    Symmetry,
    Wall,
    check_cell,
    check_gluing,
    check_symmetry,
    defect_as_field,
    set_parameter_to_zero,
)

SECTIONS = ("scenario", "params", "charts", "walls", "symmetries", "cells", "ledger", "expect")
SCENARIO_DIR = Path(__file__).with_name("scenarios")


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<scenario>"):
        self.message = message
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


@dataclass
class Entry:
    key: str
    value: str | None
    line: int = 0

    def render(self) -> str:
        return self.key if self.value is None else f"{self.key} = {self.value}"


@dataclass
class Comment:
    text: str
    line: int = 0

    def render(self) -> str:
        return self.text


@dataclass
class Scenario:
    """Raw sections of a scenario file, kept verbatim for faithful export."""

    header: list[Comment] = field(default_factory=list)
    sections: dict[str, list] = field(default_factory=dict)
    source: str = "<scenario>"

    def entries(self, section: str) -> list[Entry]:
        return [e for e in self.sections.get(section, []) if isinstance(e, Entry)]

    def setting(self, key: str, default=None):
        for e in self.entries("scenario"):
            if e.key == key:
                return e.value
        return default

    @property
    def name(self) -> str:
        return self.setting("name", Path(self.source).stem)

    def error(self, message, entry=None):
        return ScenarioError(message, getattr(entry, "line", None), self.source)

    # building -------------------------------------------------------------

    def table(self) -> ParameterTable:
        items = []
        for e in self.entries("params"):
            try:
                items.append((e.key, parse_rational(e.value or "")))
            except ParseError as exc:
                raise self.error(f"weight of {e.key}: {exc.message}", e) from None
        try:
            return ParameterTable(items)
        except ValueError as exc:
            raise self.error(str(exc)) from None

    def build(self) -> Example:
        table = self.table()
        try:
            n = int(self.setting("coords", "4"))
        except ValueError:
            raise self.error("coords must be an integer") from None
        try:
            cutoff = parse_rational(self.setting("cutoff", str(DEFAULT_CUTOFF)))
        except ParseError as exc:
            raise self.error(f"cutoff: {exc.message}") from None

        def expr(e: Entry, text: str):
            try:
                return parse_expression(text, table, n)
            except ParseError as exc:
                raise ScenarioError(f"{e.key}: {exc}", e.line, self.source) from None

        def pvexpr(e: Entry, text: str):
            try:
                return parse_polyvector(text, table, n)
            except ParseError as exc:
                raise ScenarioError(f"{e.key}: {exc}", e.line, self.source) from None

        charts = {}
        for e in self.entries("charts"):
            charts[e.key] = None if e.value is None else expr(e, e.value)

        walls = []
        for e in self.entries("walls"):
            head, *images = [part.strip() for part in (e.value or "").split(";")]
            m = re.fullmatch(r"(\S+)\s*->\s*(\S+)", head)
            if not m:
                raise self.error(f"wall {e.key}: expected 'SOURCE -> TARGET ; z_i := ...'", e)
            imgs = self._images(e, images, expr)
            try:
                sub = Substitution.from_images(n, table, imgs)
            except (ValueError, IndexError) as exc:
                raise self.error(f"wall {e.key}: {exc}", e) from None
            walls.append(Wall(e.key, m.group(1), m.group(2), sub))

        symmetries = []
        for e in self.entries("symmetries"):
            head, *images = [part.strip() for part in (e.value or "").split(";")]
            pairs = []
            for pair in head.split(","):
                m = re.fullmatch(r"\s*(\S+)\s*<->\s*(\S+)\s*", pair)
                if not m:
                    raise self.error(f"symmetry {e.key}: expected 'A <-> B, ... ; z_i := ...'", e)
                pairs.append((m.group(1), m.group(2)))
            imgs = self._images(e, images, expr)
            for i, img in imgs.items():
                if not img.is_monomial():
                    raise self.error(f"symmetry {e.key}: image of z{i} must be a monomial", e)
            symmetries.append(Symmetry(e.key, tuple(pairs), imgs))

        cells = []
        for e in self.entries("cells"):
            parts = (e.value or "").split("|")
            if len(parts) != 2:
                raise self.error(f"cell {e.key}: expected 'w w ... | w w ...'", e)
            cells.append(Cell(e.key, tuple(parts[0].split()), tuple(parts[1].split())))

        try:
            d = ScatteringDiagram(n, table, charts, walls, cells, symmetries)
        except DiagramError as exc:
            raise self.error(str(exc)) from None

        ledger = Ledger()
        for e in self.entries("ledger"):
            m = re.fullmatch(r"w([012])\[(\S+)\]", e.key)
            if not m:
                raise self.error(f"ledger key {e.key!r} must look like w0[chart], w1[wall] or w2[cell]", e)
            level, cell = int(m.group(1)), m.group(2)
            known = (d.charts, d.walls, d.cells)[level]
            if cell not in known:
                raise self.error(f"ledger entry {e.key} refers to an unknown {('chart', 'wall', 'cell')[level]}", e)
            (ledger.w0, ledger.w1, ledger.w2)[level][cell] = pvexpr(e, e.value or "0")

        expectations = {}
        valid = set(check_ids(d, ledger))
        for e in self.entries("expect"):
            if e.key not in valid:
                raise self.error(f"unknown check id {e.key!r}", e)
            try:
                parse_expectation(e.value or "", table, n)
            except (ParseError, ValueError) as exc:
                raise self.error(f"expectation for {e.key}: {exc}", e) from None
            expectations[e.key] = e.value
        return Example(self.name, d, ledger, expectations, cutoff)

    def _images(self, e: Entry, parts: list[str], expr) -> dict[int, LaurentPoly]:
        imgs = {}
        for part in parts:
            m = re.fullmatch(r"z(\d+)\s*:=\s*(.+)", part)
            if not m:
                raise self.error(f"{e.key}: expected 'z_i := expression', got {part!r}", e)
            i = int(m.group(1))
            if i in imgs:
                raise self.error(f"{e.key}: z{i} assigned twice", e)
            imgs[i] = expr(e, m.group(2))
        return imgs


# ---------------------------------------------------------------------------
# reading and writing


def loads_scenario(text: str, source: str = "<scenario>") -> Scenario:
    sc = Scenario(source=source)
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            (sc.header if current is None else sc.sections[current]).append(Comment(line, lineno))
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            current = m.group(1)
            if current not in SECTIONS:
                raise ScenarioError(f"unknown section [{current}]", lineno, source)
            if current in sc.sections:
                raise ScenarioError(f"section [{current}] appears twice", lineno, source)
            sc.sections[current] = []
            continue
        if current is None:
            raise ScenarioError("entry outside of any section", lineno, source)
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq:
            if current != "charts":
                raise ScenarioError(f"expected 'key = value' in [{current}]", lineno, source)
            value = None
        elif not key or not value:
            raise ScenarioError("empty key or value", lineno, source)
        if any(isinstance(x, Entry) and x.key == key for x in sc.sections[current]):
            raise ScenarioError(f"duplicate key {key!r} in [{current}]", lineno, source)
        sc.sections[current].append(Entry(key, value, lineno))
    return sc


def load_scenario(path) -> Scenario:
    """Load a scenario from a file path or one of the names ``main``, ``open``, ``compact``."""
    p = Path(path)
    if not p.exists() and str(path) in BUILDERS:
        p = SCENARIO_DIR / f"{path}.scn"
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc.strerror}", None, str(path)) from None
    return loads_scenario(text, str(p))


def dumps_scenario(sc: Scenario) -> str:
    blocks = []
    if sc.header:
        blocks.append("\n".join(c.render() for c in sc.header))
    for name in SECTIONS:
        if name in sc.sections:
            lines = [f"[{name}]"] + [item.render() for item in sc.sections[name]]
            blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _format_image(img: LaurentPoly, i: int, sub: Substitution) -> str:
    row = sub.matrix[i - 1]
    unit = sub.units[i - 1]
    mono = format_poly(LaurentPoly.monomial(sub.n, sub.table, row))
    if unit == 1:
        return mono
    return f"{mono}*({format_poly(unit)})"


def scenario_from_example(ex: Example, header: list[str] | None = None) -> Scenario:
    d = ex.diagram
    sc = Scenario(source=f"{ex.name}.scn")
    sc.header = [Comment(f"# {line}" if line else "#") for line in (header or [])]
    sc.sections["scenario"] = [
        Entry("name", ex.name),
        Entry("coords", str(d.n)),
        Entry("cutoff", str(ex.cutoff)),
    ]
    sc.sections["params"] = [Entry(k, str(w)) for k, w in d.table.weights.items()]
    sc.sections["charts"] = [Entry(k, None if W is None else format_poly(W)) for k, W in d.charts.items()]
    walls = []
    for w in d.walls.values():
        images = [f"z{i} := {_format_image(w.substitution.image(i), i, w.substitution)}" for i in w.substitution.moved()]
        walls.append(Entry(w.name, " ; ".join([f"{w.source} -> {w.target}"] + images)))
    sc.sections["walls"] = walls
    if d.symmetries:
        syms = []
        for s in d.symmetries.values():
            pairs = ", ".join(f"{a} <-> {b}" for a, b in s.pairs)
            images = [f"z{i} := {format_poly(img)}" for i, img in sorted(s.images.items())]
            syms.append(Entry(s.name, " ; ".join([pairs] + images)))
        sc.sections["symmetries"] = syms
    sc.sections["cells"] = [Entry(c.name, f"{' '.join(c.first)} | {' '.join(c.second)}") for c in d.cells.values()]
    ledger = []
    for level, values in enumerate((ex.ledger.w0, ex.ledger.w1, ex.ledger.w2)):
        for cell, P in values.items():
            ledger.append(Entry(f"w{level}[{cell}]", format_polyvector(P)))
    if ledger:
        sc.sections["ledger"] = ledger
    if ex.expectations:
        sc.sections["expect"] = [Entry(k, v) for k, v in ex.expectations.items()]
    return sc


def export_scenario(obj, header: list[str] | None = None) -> str:
    """Scenario text for a :class:`Scenario` or a built :class:`Example`."""
    if isinstance(obj, Example):
        obj = scenario_from_example(obj, header)
    return dumps_scenario(obj)


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class Expectation:
    kind: str  # "pass", "defect", "order"
    leading: PolyVectorField | None = None
    bound: Fraction | None = None

    def text(self) -> str:
        if self.kind == "pass":
            return "pass"
        if self.kind == "order":
            return f"order > {self.bound}"
        return "defect" if self.leading is None else f"defect {format_polyvector(self.leading)}"


def parse_expectation(text: str, table: ParameterTable, n: int) -> Expectation:
    text = text.strip()
    if text == "pass":
        return Expectation("pass")
    if text == "defect":
        return Expectation("defect")
    if text.startswith("defect "):
        return Expectation("defect", leading=parse_polyvector(text[len("defect "):], table, n))
    m = re.fullmatch(r"order\s*>\s*(\S+)", text)
    if m:
        return Expectation("order", bound=parse_rational(m.group(1)))
    raise ValueError(f"expectation must be 'pass', 'defect [EXPR]' or 'order > RAT', got {text!r}")


def _kill_expectation(exp: Expectation, pexp) -> Expectation:
    if exp.kind == "defect" and exp.leading is not None:
        killed = exp.leading.kill(pexp)
        return Expectation("pass") if killed.is_zero() else Expectation("defect", leading=killed)
    return exp


MASTER_PARTS = ("eq0", "eq1", "eq2", "full")


def check_ids(d: ScatteringDiagram, ledger: Ledger) -> list[str]:
    """Every check the runner performs, in report order."""
    ids = []
    for w in d.walls.values():
        if d.charts[w.source] is not None and d.charts[w.target] is not None:
            ids.append(f"gluing[{w.name}]")
    ids += [f"symmetry[{s}]" for s in d.symmetries]
    ids += [f"cell[{c}]" for c in d.cells]
    if not ledger.is_empty() and all(W is not None for W in d.charts.values()):
        ids += [f"ledger[{w}]" for w in d.walls]
        ids += [f"ledger[{c}]" for c in d.cells]
    if not ledger.is_empty():
        ids.append("weak[ledger]")
    ids += [f"master[{p}]" for p in MASTER_PARTS]
    ids.append("weak[W]")
    return ids


@dataclass
class CheckResult:
    id: str
    status: str  # "pass", "expected-defect", "fail"
    residual: str
    valuation: object
    location: str
    exact: bool = True
    note: str = ""

    def as_json(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "residual": self.residual,
            "valuation": None if self.valuation == INF else str(self.valuation),
            "location": self.location,
        }


@dataclass
class Report:
    scenario: str
    cutoff: Fraction
    checks: list[CheckResult] = field(default_factory=list)
    killed: str | None = None

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def get(self, check_id: str) -> CheckResult:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "expected-defect": 0, "fail": 0}
        for c in self.checks:
            out[c.status] += 1
        return out


def _leading_of(value) -> tuple[PolyVectorField | None, object]:
    """Leading-valuation part of a residual as a polyvector field, with its valuation."""
    if isinstance(value, LaurentPoly):
        value = PolyVectorField.function(value)
    if isinstance(value, PolyVectorField):
        return value.leading(), value.valuation()
    if isinstance(value, CechCochain):
        v = value.valuation()
        if v == INF:
            return PolyVectorField.zero(value.n, value.table), v
        hits = [P.leading() for vals in value.values.values() for P in vals.values() if P.valuation() == v]
        return (hits[0] if len(hits) == 1 else None), v
    if isinstance(value, list):  # several residual polynomials
        nonzero = [r for r in value if not r.is_zero()]
        if not nonzero:
            return None, INF
        v = min(r.valuation() for r in nonzero)
        lead = [r.leading() for r in nonzero if r.valuation() == v]
        return PolyVectorField.function(sum(lead[1:], lead[0])), v
    raise TypeError(type(value))


def _render_cochain_leading(c: CechCochain) -> str:
    v = c.valuation()
    if v == INF:
        return "0"
    parts = []
    for i, vals in c.values.items():
        for cell, P in vals.items():
            if P.valuation() == v:
                parts.append(f"{cell}: {format_polyvector(P.leading())}")
    return "; ".join(parts)


def _judge(exp: Expectation, is_zero: bool, leading: PolyVectorField | None, valuation) -> tuple[str, str]:
    if exp.kind == "pass":
        return ("pass", "") if is_zero else ("fail", "expected no residual")
    if exp.kind == "order":
        if is_zero:
            return "pass", ""
        if valuation > exp.bound:
            return "expected-defect", f"residual valuation {valuation} > {exp.bound}"
        return "fail", f"residual valuation {valuation} is not > {exp.bound}"
    if is_zero:
        return "fail", "a defect was expected but the residual vanishes"
    if exp.leading is None:
        return "expected-defect", ""
    if leading is not None and leading == exp.leading:
        return "expected-defect", "leading term as expected"
    return "fail", f"expected leading term {format_polyvector(exp.leading)}"


def _try_exact(fn, cutoff):
    try:
        return fn(INF), True
    except InexactPullbackError:
        return fn(cutoff), False


def run_example(ex: Example, cutoff=None, kill=None) -> Report:
    """Run every check on a built example; ``kill`` is a parameter monomial exponent vector."""
    cutoff = ex.cutoff if cutoff is None else cutoff
    d, ledger = ex.diagram, ex.ledger
    table, n = d.table, d.n
    expectations = {k: parse_expectation(v, table, n) for k, v in ex.expectations.items()}
    killed_text = None
    if kill is not None:
        d = set_parameter_to_zero(d, kill)
        ledger = ledger.kill(kill)
        expectations = {k: _kill_expectation(e, kill) for k, e in expectations.items()}
        killed_text = "*".join(format_param_monomial(table, tuple(kill)))
    report = Report(ex.name, cutoff, killed=killed_text)

    def record(check_id, value, is_zero, location, exact=True, rendered=None):
        exp = expectations.get(check_id, Expectation("pass"))
        leading, valuation = _leading_of(value)
        status, note = _judge(exp, is_zero, leading, valuation)
        if rendered is None:
            rendered = "0" if is_zero else (format_polyvector(leading) if leading is not None else "?")
        report.checks.append(CheckResult(check_id, status, rendered, valuation, location, exact, note))

    ids = check_ids(d, ledger)

    for w in d.walls.values():
        cid = f"gluing[{w.name}]"
        if cid not in ids:
            continue
        g, exact = _try_exact(lambda c: check_gluing(d, w.name, c), cutoff)
        record(cid, g.residual, g.holds(), f"wall {w.name}: {w.source} -> {w.target}", exact)

    for s in d.symmetries.values():
        r = check_symmetry(d, s.name)
        pairs = ", ".join(f"{a} <-> {b}" for a, b in s.pairs)
        record(f"symmetry[{s.name}]", list(r.residuals.values()), r.holds(), f"symmetry {s.name}: {pairs}")

    for c in d.cells.values():
        rep, exact = _try_exact(lambda k: check_cell(d, c.name, k), cutoff)
        loc = f"cell {c.name}: {' '.join(c.first)} | {' '.join(c.second)}"
        if rep.is_consistent():
            record(f"cell[{c.name}]", PolyVectorField.zero(n, table), True, loc, exact)
        else:
            try:
                field_ = defect_as_field(rep)
            except DiagramError:
                field_ = None
            exp = expectations.get(f"cell[{c.name}]", Expectation("pass"))
            status, note = _judge(exp, False, field_, rep.leading_valuation)
            text = format_polyvector(field_) if field_ is not None else "composites differ at valuation 0"
            report.checks.append(CheckResult(f"cell[{c.name}]", status, text, rep.leading_valuation, loc, exact, note))

    nerve = Nerve.from_diagram(d)
    if any(i.startswith("ledger[") for i in ids):
        lr = check_hochschild_ledger(d, ledger.w0, ledger.w1, ledger.w2)
        for r in lr.residuals:
            if r.kind == "edge":
                a, b = nerve.edges[r.location]
                loc = f"edge {r.location}: {a} -> {b}"
            else:
                loc = f"face {r.location}"
            record(f"ledger[{r.location}]", r.value, r.is_zero(), loc)

    if "weak[ledger]" in ids:
        lc = CechCochain(nerve, n, table, {0: ledger.w0, 1: ledger.w1, 2: ledger.w2})
        _record_weak(report, "weak[ledger]", lc, expectations)

    W = assemble_master_cochain(d, ledger.w2, cutoff)
    m = check_master(W, cutoff)
    where = {"eq0": "bidegree (1,0)", "eq1": "bidegree (2,1)", "eq2": "bidegree (3,2)", "full": "all bidegrees"}
    for part in MASTER_PARTS:
        c = m.component(part)
        record(f"master[{part}]", c, c.is_zero(), where[part], exact=False, rendered=_render_cochain_leading(c))

    _record_weak(report, "weak[W]", W, expectations)
    return report


def _record_weak(report, check_id, cochain, expectations):
    w = check_weak_unobstructed(cochain)
    exp = expectations.get(check_id, Expectation("pass"))
    if w.holds():
        status, note = _judge(exp, True, None, INF)
        text = "0"
    else:
        status, note = _judge(exp, False, None, INF)
        text = ", ".join(f"Cech degree {i} on {cell} has exterior degree {j}" for i, cell, j in w.violations)
    report.checks.append(CheckResult(check_id, status, text, INF, "bidegrees (i,i)", True, note))


def resolve_example(spec) -> Example:
    """Build an example from a name, a path, a :class:`Scenario` or an :class:`Example`."""
    if isinstance(spec, Example):
        return spec
    if isinstance(spec, Scenario):
        return spec.build()
    return load_scenario(spec).build()


def run_scenario(spec, cutoff=None, kill=None) -> Report:
    """Run all checks of a scenario name (``main``, ``open``, ``compact``) or file.

    ``kill`` may be a monomial string such as ``"qp*qpp"`` or an exponent vector.
    """
    ex = resolve_example(spec)
    if isinstance(kill, str):
        kill = parse_param_monomial(kill, ex.diagram.table)
    return run_example(ex, cutoff=cutoff, kill=kill)


# ---------------------------------------------------------------------------
# rendering


def emit_report(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps([c.as_json() for c in report.checks], indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}; use 'text' or 'json'")
    head = f"scenario {report.scenario} (cutoff {report.cutoff})"
    if report.killed:
        head += f", {report.killed} set to zero"
    lines = [head]
    width = max((len(c.id) for c in report.checks), default=0)
    for c in report.checks:
        tag = c.status.upper()
        val = "" if c.valuation == INF else f"  valuation {c.valuation}"
        mode = "" if c.exact else f"  [to cutoff {report.cutoff}]"
        lines.append(f"{tag:<16}{c.id:<{width}}  {c.location}{mode}")
        lines.append(f"{'':<16}residual {c.residual}{val}")
        if c.note:
            lines.append(f"{'':<16}{c.note}")
    counts = report.counts()
    lines.append(
        f"{len(report.checks)} checks: {counts['pass']} pass, "
        f"{counts['expected-defect']} expected defect, {counts['fail']} fail"
    )
    return "\n".join(lines) + "\n"
