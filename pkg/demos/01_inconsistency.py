"""Walk around the square cell of the main example and find the defect."""

from wallcross import (
    INF,
    build_main_example,
    check_cell,
    check_gluing,
    compose_path,
    defect_as_field,
    format_poly,
    interior_dW,
    parse_polyvector,
)

ex = build_main_example()
d = ex.diagram

print("charts:")
for name, W in d.charts.items():
    print(f"  W[{name}] = {format_poly(W)}")

print("\ngluing along each wall (exact, no cutoff):")
for w in d.walls:
    print(f"  {w}: {'exact' if check_gluing(d, w, INF).holds() else 'FAILS'}")

cell = d.cell("square")
first, second = compose_path(d, cell.first, INF), compose_path(d, cell.second, INF)
print(f"\npath {' '.join(cell.first)}:")
print(first)
print(f"path {' '.join(cell.second)}:")
print(second)

report = check_cell(d, "square", INF)
print("\nresiduals (first - second):")
for i, r in report.residuals.items():
    print(f"  z{i}: {format_poly(r)}")
print(f"leading valuation: {report.leading_valuation}")

field_ = defect_as_field(report)
w2 = parse_polyvector("qp*qpp*z4*d1^d2", d.table, d.n)
print(f"\ndefect as a vector field: {field_}")
print(f"-i_dW(w2) on chart --:     {-interior_dW(d.charts['--'], w2)}")
