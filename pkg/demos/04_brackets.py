"""Schouten bracket identities on a few hand-picked fields; d_i = z_i d/dz_i."""

from wallcross import build_main_example, hf_bracket, parse_floer, parse_polyvector, schouten, wedge

T = build_main_example().diagram.table


def V(text):
    return parse_polyvector(text, T, 4)


X, Y, f = V("z2*d1"), V("z1*d2"), V("z1*z2 + q*z4")
print(f"[X, Y] = {schouten(X, Y)}")
print(f"[Y, X] = {schouten(Y, X)}")
print(f"[X, f] = {schouten(X, f)}   (X applied to f)")

P, Q, R = V("z1*d1^d2"), V("z2*d3"), V("qp*z3*z4")
lhs = schouten(P, wedge(Q, R))
rhs = wedge(schouten(P, Q), R) + wedge(Q, schouten(P, R)) * (-1) ** ((2 - 1) * 1)
print(f"\nLeibniz rule holds: {lhs == rhs}")

A, B, C = V("z1*d2"), V("z2*z3*d1"), V("z4*d3^d4")
jac = schouten(A, schouten(B, C)) - schouten(schouten(A, B), C) - schouten(B, schouten(A, C))
print(f"Jacobi identity holds: {jac.is_zero()}")

print(f"\nFloer side: [z1*g2, z2*g1] = {hf_bracket(parse_floer('z1*g2', T, 4), parse_floer('z2*g1', T, 4))}")
