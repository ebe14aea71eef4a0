"""Synthesis over a parameter grid, with recipes and deterministic exports.

The dispatcher covers every dimension from the solved set {2, 3, 5, 7}:
products for even dimensions and nine, count matrices at high moduli, and
cylinder lifts below them.  Recipes are deterministic, so exports are
byte-identical across runs.
"""

import time

from hamdec import certio
from hamdec.synthesis import plan, synthesize
from hamdec.verify import verify_decomposition

print("plans:")
for d, m in ((4, 3), (7, 5), (9, 7), (10, 3), (11, 3), (11, 13)):
    tree = plan(d, m)
    kind = tree["kind"]
    extra = {k: tree[k] for k in ("a", "b") if k in tree}
    print(f"  ({d:>2},{m:>2}) -> {kind} {extra or ''}")

print("\nsynthesize + verify a small grid:")
t0 = time.perf_counter()
for d in range(2, 8):
    for m in ((2, 3, 5) if d == 2 else (3, 5)):
        report = verify_decomposition(synthesize(d, m))
        lengths = sorted(set(report.cycle_lengths.values()))
        print(f"  D_{d}({m}): pass={report.passed}, cycle length {lengths[0]}")
print(f"  ({time.perf_counter() - t0:.1f}s)")

dec = synthesize(11, 3)
doc_a = certio.canonical_json(certio.export_decomposition(dec))
doc_b = certio.canonical_json(certio.export_decomposition(synthesize(11, 3)))
print("\nrecipe export is byte-deterministic:", doc_a == doc_b)
print("recipe kind:", dec.recipe["kind"], "with base", dec.recipe["base"]["kind"])

report = verify_decomposition(dec)
report_doc = certio.export_report(report)
print("report canonical pass flag:", report_doc["canonical"]["pass"])
