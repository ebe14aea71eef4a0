"""Layer/prefix coordinates and the three certificate conditions.

Every unit step on the directed torus raises the mod-m coordinate sum by
one.  Splitting a vertex into that layer plus a triangular prefix vector
turns each step into the decrement of a prefix pattern, and a Hamilton
decomposition into a per-layer direction table satisfying three checks:
a Latin condition, layer bijectivity, and a single-cycle return.
"""

from hamdec.core import Params, apply_stop, from_layer_prefix, to_layer_prefix
from hamdec.rootflat import Schedule, TranslationRule, expand, verify_rf
from hamdec.verify import verify_decomposition

params = Params(3, 5)
x = (2, 4, 1)
lp = to_layer_prefix(x, params)
print(f"vertex {x} -> layer {lp.layer}, prefix {lp.prefix}")
print("round trip:", from_layer_prefix(lp, params))

for i in range(3):
    stepped = tuple((v + (1 if j == i else 0)) % 5 for j, v in enumerate(x))
    rank = 3 - 1 - i
    print(f"step e_{i}: {stepped} == stop rank {rank}:",
      to_layer_prefix(stepped, params) == apply_stop(lp, rank, params))

# The square-torus phase rule as a two-layer schedule, and what the
# structural verifier says about it.
m = 5
good = Schedule(
    Params(2, m),
    tuple(TranslationRule.cyclic(1 if t == m - 1 else 0, 2) for t in range(m)),
)
report = verify_rf(good, "all")
print("\nphase-rule schedule: RF1", report.rf1_ok, "RF2", report.rf2_ok,
      "RF3 lengths", sorted({n for _, n in report.rf3.values()}))

# Dropping the phase flip breaks only the global condition: the factors
# still partition arcs but close after m steps instead of m^2.
broken = Schedule(Params(2, m), tuple(TranslationRule.cyclic(0, 2) for _ in range(m)))
report = verify_rf(broken, "all")
print("identity schedule:   RF1", report.rf1_ok, "RF2", report.rf2_ok,
      "RF3 lengths", sorted({n for _, n in report.rf3.values()}))

full = verify_decomposition(expand(good, recipe={"kind": "d2-phase", "d": 2, "m": m}))
print("\nfull verification of the phase rule:", full.passed,
      "cycle lengths", sorted(set(full.cycle_lengths.values())))
