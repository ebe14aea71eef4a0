"""The closed-form constructions in dimensions two, three, and five.

Dimension three's returns are conjugate to a planar odometer; dimension
five runs a cyclic zero-set selector certified by a 27-cell exact cover,
with an explicit first-return count on a small section for m >= 5.
"""

from hamdec.smalldims import (
    construct_d2,
    construct_d3,
    construct_d5,
    d3_odometer,
    d3_psi,
    d3_return,
    d3_simulate_return,
    d5_exact_cover_check,
    d5_first_return,
    d5_selector,
    d5_simulate_first_return,
)
from hamdec.verify import verify_decomposition

for m in (2, 3, 9):
    report = verify_decomposition(construct_d2(m))
    print(f"D_2({m}): pass={report.passed}, lengths {sorted(set(report.cycle_lengths.values()))}")

m = 7
print(f"\nD_3({m}) analytic returns vs {m}-step simulation:")
for color in range(3):
    closed = d3_return(color, 2, 3, m)
    simulated = d3_simulate_return(color, 2, 3, m)
    conj = d3_psi(color, *closed, m) == d3_odometer(*d3_psi(color, 2, 3, m), m)
    print(f"  color {color}: closed {closed} simulated {simulated} odometer-conjugate {conj}")
report = verify_decomposition(construct_d3(m))
print(f"D_3({m}): pass={report.passed}")

print("\nD_5 selector on a few zero sets:",
      {(): d5_selector(()), (3,): d5_selector((3,)), (2, 4): d5_selector((2, 4))})
print("exact cover at m in {3,...,13}:",
      all(d5_exact_cover_check(m) for m in (3, 5, 7, 9, 11, 13)))

m = 7
print(f"\nfirst returns on the selector-two section at m={m}:")
for a, b in ((1, 2), (3, 0), (0, m - 1)):
    closed = d5_first_return(a, b, m)
    print(f"  ({a},{b}) -> {closed[:2]} after {closed[2]} steps "
          f"(simulated: {d5_simulate_first_return(a, b, m)})")

report = verify_decomposition(construct_d5(5))
print(f"D_5(5): pass={report.passed}, lengths {sorted(set(report.cycle_lengths.values()))}")
