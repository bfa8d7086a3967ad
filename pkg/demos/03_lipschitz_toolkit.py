"""Function-side machinery: slopes, extension, peaking, norm attainment.

Every statement about molecules has a dual statement about Lipschitz
functions. This script shows the norm-preserving extension from a
subset, builds a peaking function that attains slope 1 only at one pair,
and computes the norm-attainment set both for a pair that peaks and for
a pair broken by a middle point.

Run:  python demos/03_lipschitz_toolkit.py
"""

from fractions import Fraction as F

import freelip as fl

eq = fl.validate([[0, 1, 1], [1, 0, 1], [1, 1, 0]], ["a", "b", "c"], base="a")
chain = fl.validate([[0, 2, 1], [2, 0, 1], [1, 1, 0]], ["a", "b", "c"], base="a")

print("=== McShane extension ===")
print("Extend g(a) = 2, g(b) = 0 from {a, b} to the whole chain:")
f = fl.mcshane_extend(chain, ["a", "b"], [F(2), F(0)])
print(f"  values: {f.as_dict()}")
print(f"  Lipschitz constant preserved: {f.lip_constant} (g had 1)")
print(f"  sup norm preserved: {f.sup_norm()} (g had 2)")

print()
print("=== peaking functions ===")
cert = fl.peaking_candidate(eq, "a", "b")  # alpha defaults to c/2
print(f"pair (a,b): peaking margin c = {cert.c}, using alpha = {cert.alpha}")
print(f"  function: {cert.function.as_dict()}")
print(f"  slope at (a,b): {cert.phi_pq}, Lipschitz constant: {cert.lip_constant}")
print(f"  max |slope| on pairs avoiding a: {cert.off_peak_max} <= 1 - alpha")
print(f"  max |slope| on other pairs through a: {cert.near_peak_max} < 1")

try:
    fl.peaking_candidate(chain, "a", "b")
except fl.lipfun.MiddlePointExists as exc:  # type: ignore[attr-defined]
    print(f"pair (a,b) of the chain cannot peak: {exc}")

print()
print("=== norm attainment sets ===")
att = fl.attainment_set(eq, "a", "b", intervals="full")
print(f"equilateral (a,b): members = {att.members}")
print("  LP intervals of achievable slopes under phi(f,a,b) = 1:")
for pair, (lo, hi) in sorted(att.intervals.items()):
    print(f"    phi{pair}: [{lo}, {hi}]")

att = fl.attainment_set(chain, "a", "b", intervals="full")
print(f"chain (a,b): members = {att.members}")
print("  the middle point forces every norm-attaining function of (a,b)")
print("  to attain its norm at (a,c) and (c,b) too")

print()
print("=== duality pairing ===")
coeffs = [F(1, 2), F(-1, 3)]
norm = fl.free_norm(eq, coeffs)
h = [eq.d(x, "b") for x in eq.labels]
print(f"free vector a with ||a|| = {norm}; pairing with unit-ball h: "
      f"{fl.pairing(eq, coeffs, h)} (bounded by the norm)")
