"""The counterexample families and their depth-trend diagnostics.

Three constructions show what finite truncations can and cannot see:

* the sup-norm family {e, p, q_n}: every finite truncation keeps u_pe
  extreme, yet the concavity modulus 2/N collapses with depth, which is
  the finite shadow of extremality being lost in the (non-compact) limit;
* the planar spiral: concave at every depth, molecules extreme, but the
  excess ratios of the accumulating sequences decay to 0, flagging a
  pair that stays extreme without being strongly exposed in the limit;
* the Euclidean family {0, e1, r_n}: concave, yet provably not a
  snowflake of anything, witnessed by a triangle violation after raising
  distances to the power 3/2.

Run:  python demos/04_example_families.py
"""

from fractions import Fraction as F

import freelip as fl
from freelip.generators import FamilySpec

print("=== sup-norm family: modulus collapse across depths ===")
for depth in (4, 8, 16, 32):
    sp = fl.gen_c0_counterexample(depth)
    verdict = fl.classify_pair(sp, "p", "e")
    delta = fl.concavity_modulus(sp, "p", "e", [F(1, 2)]).entries[0].delta
    print(f"  depth {depth:>2}: u[p,e] extreme={verdict.is_extreme}, "
          f"delta(1/2) = {delta} (= 2/{depth})")
print("  excesses E(q_n;p,e) = 2/n exactly:",
      [str(fl.excess(fl.gen_c0_counterexample(6), f'q{n}', 'p', 'e').value)
       for n in range(2, 7)])

print()
print("=== planar spiral: extreme at every depth, ratios decaying ===")
spec = FamilySpec("planar_spiral", {"lam": F(1, 2), "seed": 7})
trend = fl.strongly_exposed_verdict(spec, "p", "q", depths=(4, 8, 16))
for rec in trend.records:
    print(f"  depth {rec.depth:>2}: min excess ratio = {float(rec.min_ratio):.3e}, "
          f"strongly exposed at this depth: {rec.strongly_exposed}")
print(f"  limit flag (ratio decay beats threshold {trend.threshold}): "
      f"{trend.limit_property_z_flag}")
print("  -> every finite truncation says 'strongly exposed', the trend says")
print("     the limit pair is preserved extreme but not strongly exposed")

diag = fl.sequence_diagnostics(spec, "p", "q", depths=(4, 8, 16))
print("  q-side sequence ratios E(q_n;p,q)/d(q_n,q):",
      [f"{r.ratio:.3e}" for r in diag.records])

print()
print("=== Euclidean family: concave but not a snowflake ===")
sp = fl.gen_l2_nonholder(None, None, 8)
print(f"  concave: {fl.classify_all(sp).is_concave}")
print(f"  certified margins of the defining inequality: "
      f"{min(sp.meta['margins'].values()):.3e} (all >= 2^-40)")
d0, d1 = float(sp.d("0", "r2")), float(sp.d("r2", "e1"))
print(f"  snowflake obstruction at alpha = 2/3: "
      f"{d0 ** 1.5:.6f} + {d1 ** 1.5:.6f} = {d0 ** 1.5 + d1 ** 1.5:.6f} < 1 = d(0,e1)^(3/2)")
print("  so no metric can have these distances as its alpha = 2/3 snowflake")
