"""The compact example: exact gluing, symmetries, and a defect with higher corrections."""

from fractions import Fraction

from wallcross import build_compact_example, check_cell, check_gluing, check_symmetry, defect_as_field, format_poly

ex = build_compact_example()
d = ex.diagram
cutoff = Fraction(20)

for s in ("z1flip", "z2flip"):
    print(f"symmetry {s}: {'exact' if check_symmetry(d, s).holds() else 'FAILS'}")
for w in d.walls:
    print(f"gluing {w} up to valuation {cutoff}: {'holds' if check_gluing(d, w, cutoff).holds() else 'FAILS'}")

report = check_cell(d, "square", cutoff)
print(f"\nleading defect: {defect_as_field(report)}")
for i, r in report.residuals.items():
    rest = r - r.leading()
    print(f"  z{i}: {len(r)} terms, leading {format_poly(r.leading())}, next valuation {rest.valuation()}")
