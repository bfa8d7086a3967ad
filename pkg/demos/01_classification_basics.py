"""Classifying molecules over small metric spaces.

A molecule u_pq is extreme in the free-space unit ball exactly when no
point lies strictly between p and q. This script walks the two smallest
interesting cases: an equilateral triangle (everything extreme, the ball
is a hexagon) and a three-point chain whose middle point destroys one
molecule's extremality.

Run:  python demos/01_classification_basics.py
"""

from fractions import Fraction as F

import freelip as fl

print("=== equilateral triangle ===")
eq = fl.validate([[0, 1, 1], [1, 0, 1], [1, 1, 0]], ["a", "b", "c"], base="a")
report = fl.classify_all(eq)
print(f"concave: {report.is_concave}")
for v in report.pair_verdicts:
    print(f"  u[{v.pair[0]},{v.pair[1]}]: extreme={v.is_extreme}  min_ratio={v.min_ratio}")

print()
print("=== chain: d(a,b) = d(a,c) + d(c,b) = 2 ===")
chain = fl.validate([[0, 2, 1], [2, 0, 1], [1, 1, 0]], ["a", "b", "c"], base="a")
print(f"aligned triples (middle, end, end): {fl.aligned_triples(chain)}")
v = fl.classify_pair(chain, "a", "b")
print(f"u[a,b]: extreme={v.is_extreme}, middle witness={v.witness_middle}")
for note in v.notes:
    print(f"  note: {note}")

print()
print("The excess E(r;p,q) = d(r,p) + d(r,q) - d(p,q) drives everything:")
print(f"  equilateral E(c;a,b) = {fl.excess(eq, 'c', 'a', 'b').value}")
print(f"  chain       E(c;a,b) = {fl.excess(chain, 'c', 'a', 'b').value}")

print()
print("Concavity modulus of the equilateral pair (a,b): the minimum excess")
print("among points at least eps away from both endpoints.")
for entry in fl.concavity_modulus(eq, "a", "b", [F(1, 4), F(1, 2), F(1)]).entries:
    print(f"  delta({entry.eps}) = {entry.delta}   witness: {entry.witness}")

print()
print("Snowflaking (d -> d^alpha) makes every triangle strictly concave,")
print("so any valid space becomes concave:")
snow = fl.holder_transform(chain, F(1, 2))
print(f"  snowflaked chain concave: {fl.classify_all(snow).is_concave}")
print(f"  aligned triples after transform: {fl.aligned_triples(snow)}")
