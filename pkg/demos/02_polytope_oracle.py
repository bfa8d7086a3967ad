"""The LP oracle: extremality as a vertex question on the molecule hull.

The unit ball of the free space over a finite space is the convex hull
of all molecules. Whether u_pq is a vertex of that hull is decided here
by exact rational linear programming, completely independent of the
geometric middle-point criterion, and the two must always agree. The
oracle also produces auditable certificates: convex weights when u_pq
decomposes, a separating functional when it does not.

Run:  python demos/02_polytope_oracle.py
"""

import random
from fractions import Fraction as F

import freelip as fl

print("=== three points with a base: e at distance 1 from a tight pair ===")
vee = fl.validate([[0, 1, 1], [1, 0, 2], [1, 2, 0]], ["e", "a", "b"], base="e")
m = fl.molecule_vector(vee, "a", "b")
print(f"u[a,b] coordinates over (a,b): {m.vector}")
print(f"free_norm(u[a,b]) = {fl.free_norm(vee, m.vector)}")

cert = fl.is_vertex(vee, "a", "b")
print(f"is_vertex(a,b): {cert.vertex}")
print(f"  decomposition weights: {cert.weights}")
print("  (e lies between a and b, so u[a,b] = 1/2 u[a,e] + 1/2 u[e,b])")

cert = fl.is_vertex(vee, "e", "a")
print(f"is_vertex(e,a): {cert.vertex}")
print(f"  separating functional: {cert.separating}, margin {cert.margin}")

print()
print("=== the vector identity behind non-extremality ===")
rep = fl.decomposition_check(vee, "a", "b", "e")
print(f"u[a,b] = {rep.w1} u[a,e] + {rep.w2} u[e,b] + residual {rep.residual}")
print(f"coefficient sum = {rep.coefficient_sum} = 1 + E(e;a,b)/d(a,b)")
print(f"convex combination: {rep.is_convex_combination}")

print()
print("=== oracle vs geometric classifier on random exact spaces ===")
rng = random.Random(42)
agreements = 0
pairs = 0
for _ in range(10):
    n = rng.randint(3, 6)
    matrix = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i][j] = matrix[j][i] = F(rng.randint(2, 12))
    # shortest-path repair
    for k in range(n):
        for i in range(n):
            for j in range(n):
                matrix[i][j] = min(matrix[i][j], matrix[i][k] + matrix[k][j])
    sp = fl.validate(matrix, [f"x{i}" for i in range(n)])
    for p in range(n):
        for q in range(p + 1, n):
            pairs += 1
            if fl.is_vertex(sp, p, q).vertex == fl.classify_pair(sp, p, q).is_extreme:
                agreements += 1
print(f"{agreements}/{pairs} pairs agree (must be all)")
