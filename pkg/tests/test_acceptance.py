"""Acceptance suite: one test per criterion, with a printed verdict line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines.  Every tolerance is exact; the step budget for exhaustive work is
the package default of 2*10^8.
"""

import itertools
import random

import numpy as np

from hamdec import tables
from hamdec.countmatrix import (
    DegreeSequencePair,
    check_admissible,
    d7_matrix,
    gale_ryser_check,
    gale_ryser_realize,
    high_modulus_matrix,
    matrix_decomposition,
    signed_core_q1,
    signed_core_qge2,
)
from hamdec.d7boundary import (
    boundary_schedule,
    generate_rank,
    mc7_check,
    verify_rank,
)
from hamdec.errors import InfeasibleDegrees
from hamdec.prefix import (
    LABEL_DELTA,
    LABEL_ZERO,
    LabelCounts,
    check_prefix_counts,
    compose_labels,
    drift_sum,
    label_set,
)
from hamdec.rootflat import first_return_length, verify_rf
from hamdec.smalldims import (
    construct_d3,
    d3_odometer,
    d3_psi,
    d3_return,
    d5_exact_cover_check,
    d5_first_return,
    d5_g_step,
    d5_simulate_first_return,
)
from hamdec.synthesis import synthesize
from hamdec.verify import (
    DEFAULT_BUDGET,
    exhaustive_cost,
    verify_decomposition,
    verify_structural,
)

SEED = 20260808


def _verdict(number, ok, detail):
    print(f"criterion {number:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def acceptance_grid():
    points = []
    for d in range(2, 14):
        moduli = (2, 3, 5, 7, 9, 11) if d == 2 else (3, 5, 7, 9, 11)
        for m in moduli:
            if d * m**d <= DEFAULT_BUDGET:
                points.append((d, m))
    return points


def test_criterion_01_grid_hamiltonicity():
    failures = []
    points = acceptance_grid()
    for d, m in points:
        dec = synthesize(d, m)
        report = verify_decomposition(dec)
        ok = (
            report.arc_partition_ok
            and set(report.cycle_lengths.values()) == {m**d}
            and len(report.cycle_lengths) == d
        )
        if not ok:
            failures.append((d, m))
    _verdict(
        1,
        not failures,
        f"exhaustive Hamiltonicity over {len(points)} grid points"
        + (f"; failures: {failures}" if failures else ""),
    )


def test_criterion_02_d3_analytic_oracle():
    bad = []
    for m in range(3, 100, 2):
        dec = construct_d3(m)
        # Simulate all m^2 layer-zero chart points for m steps, batched.
        i, k = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        i, k = i.ravel(), k.ravel()
        for c in range(3):
            coords = np.stack([i, (-i - k) % m, k], axis=1)
            for _ in range(m):
                dirs = dec.directions(coords, c)
                rows = np.arange(coords.shape[0])
                coords[rows, dirs] = (coords[rows, dirs] + 1) % m
            got = (coords[:, 0], coords[:, 2])
            want = np.array([d3_return(c, int(a), int(b), m) for a, b in zip(i, k)])
            if not (np.array_equal(got[0], want[:, 0]) and np.array_equal(got[1], want[:, 1])):
                bad.append((m, c, "return"))
        # Exhaustive conjugacy on the full chart.
        for c in range(3):
            for a in range(m):
                for b in range(m):
                    if d3_psi(c, *d3_return(c, a, b, m), m) != d3_odometer(
                        *d3_psi(c, a, b, m), m
                    ):
                        bad.append((m, c, a, b))
                        break
    _verdict(2, not bad, f"analytic three-dimensional returns for odd m in [3, 99]"
             + (f"; failures: {bad[:3]}" if bad else ""))


def test_criterion_03_d5_certificates():
    covers = all(d5_exact_cover_check(m) for m in (3, 5, 7, 9, 11, 13))
    w = (0, 0, 0, 0, 0)
    table_ok = True
    for r in range(81):
        table_ok = table_ok and w[:4] == tables.D5_M3_CYCLE[r]
        w = d5_g_step(w, 3)
    table_ok = table_ok and w == (0, 0, 0, 0, 0)
    _verdict(3, covers and table_ok,
             "exact cover on m in {3,...,13} and the 81-row return cycle")


def test_criterion_04_d5_first_return_oracle():
    ok = True
    details = []
    for m in (5, 7, 9):
        total = 0
        for a in range(m):
            for b in range(m):
                if (a + b) % m == 0:
                    continue
                closed = d5_first_return(a, b, m)
                if closed != d5_simulate_first_return(a, b, m):
                    ok = False
                    details.append((m, a, b))
                total += closed[2]
        if total != m**4:
            ok = False
            details.append((m, "sum", total))
    wrap = d5_first_return(1, 2, 5) == (3, 3, 40)
    _verdict(4, ok and wrap,
             "first returns match simulation on m in {5,7,9}, sums m^4, wrap 40"
             + (f"; failures: {details[:3]}" if details else ""))


def test_criterion_05_d7_high_modulus():
    matrices_ok = all(check_admissible(d7_matrix(m))[0] for m in range(7, 100, 2))
    walks_ok = True
    for m in (7, 9):
        dec = matrix_decomposition(d7_matrix(m), "d7-parametric")
        report = verify_decomposition(dec)
        walks_ok = walks_ok and report.passed and set(report.cycle_lengths.values()) == {m**7}
    _verdict(5, matrices_ok and walks_ok,
             "admissibility for odd m in [7, 99]; exhaustive walks at m in {7, 9}")


def test_criterion_06_d7_boundary():
    ok = True
    details = []
    for m, rank_total in ((3, 5103), (5, 109375)):
        if not mc7_check(m):
            ok, _ = False, details.append((m, "mc7"))
        rf = verify_rf(boundary_schedule(m), "all")
        if not rf.ok or any(length != m**6 for _, length in rf.rf3.values()):
            ok, _ = False, details.append((m, "rf"))
        cert = generate_rank(m)
        if sum(len(r) for r in cert.ranks) != rank_total:
            ok, _ = False, details.append((m, "rank size"))
        if not verify_rank(cert, boundary_schedule(m)):
            ok, _ = False, details.append((m, "rank verify"))
    _verdict(6, ok, "boundary compilers: MC7, RF suite, regenerated rank data"
             + (f"; failures: {details}" if details else ""))


def test_criterion_07_high_modulus_generality():
    ok = True
    for d in (5, 7, 9, 11):
        for m in range(d, 26, 2):
            good, violations = check_admissible(high_modulus_matrix(d, m))
            ok = ok and good
    reproduced = high_modulus_matrix(5, 9).entries == tables.D5_M9_COUNT_MATRIX
    _verdict(7, ok and reproduced,
             "general matrices admissible for odd d in {5,...,11}, d <= m <= 25; "
             "worked five-by-nine matrix reproduced entry-for-entry")


def test_criterion_08_signed_core_properties():
    ok = True
    details = []
    for big_l in (4, 6, 8, 10):
        for r in range(1, big_l, 2):
            core = signed_core_q1(big_l, r)  # sums validated on construction
            for i in range(big_l):
                if core.eps[i] == 0 and -2 in core.sigma[i]:
                    ok = False
                    details.append(("q1", big_l, r, i))
            c_pow = 1
            while c_pow < big_l:
                c_pow *= 2
            a = tuple(2 if i < c_pow - big_l else 1 for i in range(big_l))
            eps = tuple(1 if i < r else 0 for i in range(big_l))
            n_twos = c_pow - (big_l - 1)
            c = tuple(1 if k < big_l - 1 - n_twos else 2 for k in range(big_l - 1))
            signed_core_qge2(big_l, r, c_pow, a, eps, c)
    _verdict(8, ok, "signed cores: exact sums, entry range, no -2 in eps=0 rows"
             + (f"; failures: {details[:3]}" if details else ""))


def test_criterion_09_gale_ryser_equivalence():
    checked = realized = 0
    ok = True
    for big_l, p in [(4, 4), (5, 5), (6, 5)]:
        rows_iter = itertools.combinations_with_replacement(range(p, -1, -1), big_l)
        for rows in rows_iter:
            for cols in itertools.combinations_with_replacement(range(big_l, -1, -1), p):
                pair = DegreeSequencePair(rows, cols)
                feasible = gale_ryser_check(pair)
                checked += 1
                if feasible:
                    got = gale_ryser_realize(pair)
                    realized += 1
                    if (
                        got.sum(axis=1).tolist() != list(rows)
                        or got.sum(axis=0).tolist() != list(cols)
                    ):
                        ok = False
                else:
                    try:
                        gale_ryser_realize(pair)
                        ok = False
                    except InfeasibleDegrees:
                        pass
    _verdict(9, ok, f"realize-iff-check over {checked} degree pairs "
             f"({realized} realized with exact degrees)")


def test_criterion_10_prefix_count_soundness():
    rng = random.Random(SEED)
    ok = True
    details = []
    for d in (3, 4, 5):
        for m in (3, 5, 7):
            labels = label_set(d)
            passing = 0
            for _ in range(500):
                length = m * rng.randint(1, 3)
                seq = [(rng.randrange(m), rng.choice(labels)) for _ in range(length)]
                counts = LabelCounts.from_sequence([lab for _, lab in seq], d)
                good, _ = check_prefix_counts(counts, m, length)
                if not good:
                    continue
                passing += 1
                perm = compose_labels(seq, d, m)
                if first_return_length(perm, 0) != m ** (d - 1):
                    ok = False
                    details.append((d, m, seq[:4]))
                    break
            if passing < 50:
                ok = False
                details.append((d, m, f"only {passing} passing sequences"))
    drift_ok = True
    for m in (3, 5):
        for r in (1, 2, 3):
            drift_ok = drift_ok and drift_sum(r, m, LABEL_ZERO) == 0
            drift_ok = drift_ok and drift_sum(r, m, LABEL_DELTA) == (-((m - 1) ** r)) % m
            drift_ok = drift_ok and drift_sum(r, m, r + 1) == (-(m**r - (m - 1) ** r)) % m
            for a in range(2, r + 1):
                drift_ok = drift_ok and drift_sum(r, m, a) == 0
            for a in (r + 2, r + 3):
                drift_ok = drift_ok and drift_sum(r, m, a) == (-(m**r)) % m
    _verdict(10, ok and drift_ok,
             "500 seeded sequences per (d, m): count-pass implies one cycle; "
             "drift table matches for r <= 3, m in {3, 5}"
             + (f"; failures: {details[:2]}" if details else ""))


def test_criterion_11_lift_regime():
    ok = True
    details = []
    for m in (3, 5, 7, 9):
        dec = synthesize(11, m)
        report = verify_structural(dec)
        if not report.passed:
            ok = False
            details.append((m, [n for n, good, _ in report.checks if not good]))
    dec3 = synthesize(11, 3)
    full = verify_decomposition(dec3)
    exhaustive_ok = full.passed and set(full.cycle_lengths.values()) == {177147}
    threshold_ok = 3**5 == 243 > 198 == 3 * 11 * 6
    _verdict(11, ok and exhaustive_ok and threshold_ok,
             "dimension-eleven lifts: structural suite for m in {3,5,7,9}, "
             "exhaustive eleven cycles of 177147 at m=3"
             + (f"; failures: {details}" if details else ""))


def test_criterion_12_declared_desk_scale_boundary():
    # Full verification of the eleven-dimensional torus at m = 9 would walk
    # 9^11 vertices per color; that exceeds the step budget by design and is
    # substituted by the structural suite, whose hypotheses the lift
    # theorems consume directly (checked in criterion 11).
    from hamdec.core import Params

    oversized = exhaustive_cost(Params(11, 9))
    declared = oversized > DEFAULT_BUDGET
    report = verify_decomposition(synthesize(11, 9), "auto")
    _verdict(12, declared and report.mode == "structural" and report.passed,
             f"D_11(9) needs {oversized} steps > budget {DEFAULT_BUDGET}; "
             "structural substitute passes and is so reported")
