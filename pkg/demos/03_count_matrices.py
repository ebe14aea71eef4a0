"""Count matrices: from label-count arithmetic to verified decompositions.

A d x d matrix over the label columns with unit row conditions compiles
into m per-layer label permutations via perfect matchings; the gcd
conditions alone then force every color return to be one big cycle.
"""

import numpy as np

from hamdec.countmatrix import (
    check_admissible,
    d7_matrix,
    high_modulus_matrix,
    matrix_decomposition,
    signed_core_q1,
)
from hamdec.rootflat import verify_rf
from hamdec.verify import verify_decomposition


def show(matrix, title):
    print(title)
    header = ["0", "D"] + [str(k) for k in range(2, matrix.d)]
    print("      " + " ".join(f"{h:>3}" for h in header))
    for i, row in enumerate(matrix.entries):
        print(f"  row {i}: " + " ".join(f"{v:>3}" for v in row))


n7 = d7_matrix(7)
show(n7, "seven-dimensional matrix at m = 7:")
print("admissible:", check_admissible(n7)[0])

worked = high_modulus_matrix(5, 9)
show(worked, "\nfive-dimensional matrix at m = 9 (signed binary-layer assembly):")

core = signed_core_q1(8, 3)
print("\nq=1 signed core at L=8, r=3: row sums",
      [sum(row) for row in core.sigma], "column values", core.c)

dec = matrix_decomposition(n7, "d7-parametric")
rf = verify_rf(dec, "all")
print("\ncompiled schedule of the m=7 matrix: RF suite pass =", rf.ok,
      "return lengths", sorted({n for _, n in rf.rf3.values()}))

report = verify_decomposition(matrix_decomposition(worked, "high-modulus"))
print("full verification of the m=9 matrix decomposition:", report.passed,
      "lengths", sorted(set(report.cycle_lengths.values())))

print("\nadmissibility across moduli:")
for d in (5, 7, 9, 11):
    good = all(check_admissible(high_modulus_matrix(d, m))[0] for m in range(d, 26, 2))
    print(f"  d={d}: odd m in [{d}, 25] all admissible = {good}")
