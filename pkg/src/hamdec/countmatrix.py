"""Prefix-admissible count matrices and their compilation into schedules.

A count matrix prescribes, per color, how many times each prefix label
occurs in the color's m-layer return word.  Admissibility asks for
nonnegative entries, row and column sums m, and per row the unit conditions
gcd(N_0, m) = 1 and gcd(N_k - N_Delta, m) = 1.  An admissible matrix splits
into m perfect matchings of the color-label multigraph, one per layer, and
the resulting schedule passes the root-flat checks by the one-layer Latin
lemma and the prefix-count criterion.

Two constructions produce admissible matrices: the explicit parametric
families in dimension seven, and the general signed binary-layer assembly
for odd d >= 5 at any odd m >= d, with separate cores for quotient q >= 2
and q = 1.  The signed cores realize their 0/1 layers through Gale-Ryser
degree sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tables
from .core import Params
from .errors import (
    InfeasibleDegrees,
    InternalError,
    InvalidInput,
    UnsupportedParameters,
)
from .rootflat import Decomposition, PrefixLabelRule, Schedule, expand

__all__ = [
    "CountMatrix",
    "SignedCore",
    "DegreeSequencePair",
    "check_admissible",
    "d7_matrix",
    "gale_ryser_check",
    "gale_ryser_realize",
    "signed_core_qge2",
    "signed_core_q1",
    "signed_column_supply",
    "high_modulus_matrix",
    "schedule_from_matrix",
    "matrix_decomposition",
]


@dataclass(frozen=True)
class CountMatrix:
    """d x d nonnegative matrix over label columns 0, Delta, 2, ..., d-1."""

    d: int
    m: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if len(rows) != self.d or any(len(r) != self.d for r in rows):
            raise InvalidInput(f"count matrix must be {self.d}x{self.d}")

    def row_counts(self, row: int):
        from .prefix import LabelCounts

        r = self.entries[row]
        return LabelCounts(r[0], r[1], tuple(r[2:]))


@dataclass(frozen=True)
class DegreeSequencePair:
    """Row and column degree targets for a 0/1 matrix."""

    row_degrees: tuple[int, ...]
    col_degrees: tuple[int, ...]


@dataclass(frozen=True)
class SignedCore:
    """Signed block of a high-modulus matrix, entries in {-2,-1,1,2}.

    Row i sums to r - a_i - L*eps_i and column k sums to -c_k.
    """

    L: int
    r: int
    a: tuple[int, ...]
    eps: tuple[int, ...]
    c: tuple[int, ...]
    sigma: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        L, p = self.L, self.L - 1
        if len(self.sigma) != L or any(len(row) != p for row in self.sigma):
            raise InvalidInput("signed core has wrong shape")
        for i, row in enumerate(self.sigma):
            if any(v not in (-2, -1, 1, 2) for v in row):
                raise InternalError(f"signed entry outside range in row {i}")
            want = self.r - self.a[i] - L * self.eps[i]
            if sum(row) != want:
                raise InternalError(f"row {i} sums to {sum(row)}, want {want}")
        for k in range(p):
            got = sum(self.sigma[i][k] for i in range(L))
            if got != -self.c[k]:
                raise InternalError(f"column {k} sums to {got}, want {-self.c[k]}")


def check_admissible(n: CountMatrix) -> tuple[bool, list[str]]:
    """Evaluate the four admissibility conditions; list every violation."""
    violations: list[str] = []
    d, m = n.d, n.m
    for i, row in enumerate(n.entries):
        for j, v in enumerate(row):
            if v < 0:
                violations.append(f"C1: negative entry at ({i},{j})")
        if sum(row) != m:
            violations.append(f"C2: row {i} sums to {sum(row)}")
        if math.gcd(row[0], m) != 1:
            violations.append(f"C4: gcd(N_0,{m})!=1 in row {i}")
        for k in range(2, d):
            if math.gcd(row[k] - row[1], m) != 1:
                violations.append(f"C4: gcd(N_{k}-N_Delta,{m})!=1 in row {i}")
    for j in range(d):
        col = sum(row[j] for row in n.entries)
        if col != m:
            violations.append(f"C3: column {j} sums to {col}")
    return not violations, violations


# --- dimension-seven parametric families ------------------------------------


def d7_matrix(m: int) -> CountMatrix:
    """The explicit seven-admissible matrix for odd m >= 7."""
    if m < 7 or m % 2 == 0:
        raise UnsupportedParameters(f"d7 matrices need odd m >= 7, got {m}")
    if m == 7:
        return CountMatrix(7, 7, tables.D7_COUNT_MATRIX_M7)
    res = m % 6
    if res == 1:
        s = (m - 1) // 6
        rows = (
            (1, s + 1, s - 1, s - 1, s - 1, s - 1, s + 3),
            (1, s + 1, s - 1, s - 1, s - 1, s - 1, s + 3),
            (1, s + 1, s - 1, s - 1, s - 1, s + 2, s),
            (1, s, s + 1, s + 1, s + 1, s - 1, s - 2),
            (2, s - 1, s, s, s + 1, s + 1, s - 2),
            (2, s - 1, s + 1, s + 1, s, s, s - 2),
            (6 * s - 7, 0, 2, 2, 2, 1, 1),
        )
    elif res == 3:
        s = (m - 3) // 6
        rows = (
            (1, s + 2, s, s, s, s, s),
            (1, s + 2, s, s, s, s, s),
            (1, s + 2, s, s, s, s, s),
            (1, s - 1, s, s, s + 1, s + 1, s + 1),
            (2, s - 1, s, s, s, s + 1, s + 1),
            (2, s - 1, s + 1, s + 1, s, s, s),
            (6 * s - 5, 0, 2, 2, 2, 1, 1),
        )
    else:
        s = (m - 5) // 6
        rows = (
            (1, s + 2, s, s, s, s + 1, s + 1),
            (1, s + 2, s, s, s, s + 1, s + 1),
            (1, s + 2, s, s, s, s + 1, s + 1),
            (1, s, s + 1, s + 1, s + 1, s - 1, s + 2),
            (2, s, s + 1, s + 1, s + 1, s + 1, s - 1),
            (2, s - 1, s + 1, s + 1, s + 1, s + 1, s),
            (6 * s - 3, 0, 2, 2, 2, 1, 1),
        )
    return CountMatrix(7, m, rows)


# --- Gale-Ryser --------------------------------------------------------------


def gale_ryser_check(pair: DegreeSequencePair) -> bool:
    """Feasibility of a bipartite 0/1 degree pair, range-reduced.

    The partial-sum inequalities are automatic for t <= min(col degrees) and
    t >= max(col degrees), so only the intermediate range is scanned.
    """
    rows, cols = pair.row_degrees, pair.col_degrees
    p, big_l = len(cols), len(rows)
    if any(v < 0 or v > p for v in rows) or any(v < 0 or v > big_l for v in cols):
        return False
    if sum(rows) != sum(cols):
        return False
    if not rows or not cols:
        return sum(rows) == 0 and sum(cols) == 0
    desc = sorted(rows, reverse=True)
    partial = 0
    e_min, e_max = min(cols), max(cols)
    for t in range(1, big_l + 1):
        partial += desc[t - 1]
        if t <= e_min or t >= e_max:
            continue
        if partial > sum(min(t, e) for e in cols):
            return False
    return True


def gale_ryser_realize(pair: DegreeSequencePair) -> np.ndarray:
    """Deterministic 0/1 realization of a feasible degree pair.

    Columns are filled in order; each takes the rows of largest residual
    degree, ties broken by row index.
    """
    if not gale_ryser_check(pair):
        raise InfeasibleDegrees(f"no 0/1 matrix realizes {pair}")
    rows, cols = pair.row_degrees, pair.col_degrees
    big_l, p = len(rows), len(cols)
    residual = list(rows)
    out = np.zeros((big_l, p), dtype=np.int64)
    for k in range(p):
        order = sorted(range(big_l), key=lambda i: (-residual[i], i))
        take = order[: cols[k]]
        for i in take:
            if residual[i] <= 0:
                raise InfeasibleDegrees(f"column {k} starves at row {i}")
            residual[i] -= 1
            out[i, k] = 1
    if any(residual):
        raise InfeasibleDegrees("residual row degrees remain after fill")
    return out


def signed_column_supply(L: int, c: int, j: int) -> int:
    """Largest sum of j entries over signed columns with total -c."""
    if c not in (1, 2) or not 0 <= j <= L:
        raise InvalidInput("supply bound needs c in {1,2} and 0 <= j <= L")
    return min(2 * j, 2 * (L - j) - c)


# --- signed binary-layer cores ----------------------------------------------


def _class_order(a, eps, L):
    """Row indices grouped F1, F2, E1, E2 (by eps then a), each ascending."""
    f1 = [i for i in range(L) if eps[i] == 0 and a[i] == 1]
    f2 = [i for i in range(L) if eps[i] == 0 and a[i] == 2]
    e1 = [i for i in range(L) if eps[i] == 1 and a[i] == 1]
    e2 = [i for i in range(L) if eps[i] == 1 and a[i] == 2]
    return f1, f2, e1, e2


def signed_core_qge2(L, r, C, a, eps, c) -> SignedCore:
    """Signed core for the ordinary q >= 2 assembly.

    For L = 4 the embedded ten-row table closes the construction; for even
    L >= 6 the core splits as -2 + A + 3B with both 0/1 layers realized
    through Gale-Ryser degree sequences, case-split on s = (r-1)/2.
    """
    a, eps, c = tuple(a), tuple(eps), tuple(c)
    p = L - 1
    if L < 4 or L % 2:
        raise InvalidInput(f"L must be even >= 4, got {L}")
    if not (1 <= r < L and r % 2 == 1):
        raise InvalidInput(f"r must be odd in [1, {L}), got {r}")
    if C & (C - 1) or not L <= C < 2 * L:
        raise InvalidInput(f"C must be a power of two in [{L}, {2 * L}), got {C}")
    if sum(a) != C or sum(c) != C or sum(eps) != r:
        raise InvalidInput("a, c must sum to C and eps to r")
    if any(v not in (1, 2) for v in a + c) or any(v not in (0, 1) for v in eps):
        raise InvalidInput("a, c entries must be 1 or 2; eps entries 0 or 1")
    if sorted(c, reverse=False) != list(c):
        # Columns with c_k = 1 must precede those with c_k = 2 so that the
        # L=4 table and the case degrees can be read off positionally.
        raise InvalidInput("c must list its 1 entries before its 2 entries")

    f1, f2, e1, e2 = _class_order(a, eps, L)
    if L == 4:
        key = (r, len(f2) + len(e2), len(e2))
        entry = tables.SIGNED_L4_TABLE.get(key)
        if entry is None:
            raise InternalError(f"no L=4 table row for (r, A2, x) = {key}")
        sizes, columns = entry
        if sizes != (len(f1), len(f2), len(e1), len(e2)):
            raise InternalError(f"class sizes {sizes} mismatch at {key}")
        order = f1 + f2 + e1 + e2
        sigma = [[0] * p for _ in range(L)]
        for k, col in enumerate(columns):
            for slot, i in enumerate(order):
                sigma[i][k] = col[slot]
        return SignedCore(L, r, a, eps, c, tuple(tuple(row) for row in sigma))

    h = L // 2
    s = (r - 1) // 2
    x, y = len(e2), len(f2)
    c2_cols = [k for k in range(p) if c[k] == 2]
    deg_b_rows = [0] * L
    deg_b_cols = [0] * p
    if s <= h - 3:
        for i in f1 + f2:
            deg_b_rows[i] = h + s
        for i in e1 + e2:
            deg_b_rows[i] = s
        deg_b_cols = [h] * p
    elif s == h - 2:
        for i in f1:
            deg_b_rows[i] = 2 * h - 2
        for i in f2:
            deg_b_rows[i] = 2 * h - 3
        for i in e1 + e2:
            deg_b_rows[i] = h - 2
        deg_b_cols = [h] * p
        for k in c2_cols[:y]:
            deg_b_cols[k] = h - 1
    else:
        for i in f1 + f2:
            deg_b_rows[i] = 2 * h - 2
        for i in e1 + e2:
            deg_b_rows[i] = h - 1
        deg_b_cols = [h] * p
        deg_b_cols[c2_cols[0]] = h - 1
    b_layer = gale_ryser_realize(
        DegreeSequencePair(tuple(deg_b_rows), tuple(deg_b_cols))
    )
    shifted_rows = tuple(
        r - a[i] - L * eps[i] + 2 * p - 3 * deg_b_rows[i] for i in range(L)
    )
    shifted_cols = tuple(2 * L - c[k] - 3 * deg_b_cols[k] for k in range(p))
    a_layer = gale_ryser_realize(DegreeSequencePair(shifted_rows, shifted_cols))
    sigma = (-2 + a_layer + 3 * b_layer).tolist()
    return SignedCore(L, r, a, eps, c, tuple(tuple(row) for row in sigma))


def _kuhn_matching(adj: list[list[int]], n_right: int) -> list[int]:
    """Deterministic augmenting-path matching covering every left vertex.

    ``adj`` lists right neighbors per left vertex in scan order.  A left
    vertex with a single neighbor is effectively pinned to it.
    """
    match_right = [-1] * n_right
    match_left = [-1] * len(adj)

    def augment(u, seen):
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] == -1 or augment(match_right[v], seen):
                match_right[v] = u
                match_left[u] = v
                return True
        return False

    for u in range(len(adj)):
        if match_left[u] == -1:
            if not augment(u, [False] * n_right):
                raise InternalError("matching starved; Hall bound violated")
    return match_left


def signed_core_q1(L: int, r: int) -> SignedCore:
    """Signed core for m = L + r, where rows with eps = 0 may hold no -2.

    Builds a +/-1 matrix from a Gale-Ryser layer, matches the eps = 0 rows
    to +1 positions by augmenting paths, and edits the matched entries to
    +2 with one compensating -2 in the distinguished row.
    """
    if L < 4 or L % 2:
        raise InvalidInput(f"L must be even >= 4, got {L}")
    if not (1 <= r <= L - 1 and r % 2 == 1):
        raise InvalidInput(f"r must be odd in [1, {L - 1}], got {r}")
    p = L - 1
    n2 = list(range(r - 1))
    nu = L - 1
    p_rows = [i for i in range(L) if i not in n2 and i != nu]
    a = tuple(2 if i in n2 else 1 for i in range(L))
    eps = tuple(1 if (i in n2 or i == nu) else 0 for i in range(L))

    deg_rows = [0] * L
    for i in p_rows:
        deg_rows[i] = (L + r - 3) // 2
    for i in n2:
        deg_rows[i] = (r - 3) // 2
    deg_rows[nu] = (r - 1) // 2
    deg_cols = [(L - 2) // 2] * p
    ones = gale_ryser_realize(DegreeSequencePair(tuple(deg_rows), tuple(deg_cols)))
    b = 2 * ones - 1

    adj = [[k for k in range(p) if ones[i, k]] for i in p_rows]
    if r == 1:
        match = _kuhn_matching(adj, p)
        y0 = match[0]
    else:
        forced = None
        for pos, i in enumerate(p_rows):
            for k in range(p):
                if ones[i, k] and not ones[nu, k]:
                    forced = (pos, k)
                    break
            if forced:
                break
        if forced is None:
            raise InternalError("no distinguished +1 position; degrees violated")
        pos0, y0 = forced
        adj[pos0] = [y0]
        match = _kuhn_matching(adj, p)

    sigma = b.copy()
    for pos, i in enumerate(p_rows):
        sigma[i, match[pos]] = 2
    sigma[nu, y0] = -2
    matched = {match[pos] for pos in range(len(p_rows))}
    c = tuple(1 if (k in matched and k != y0) else 2 for k in range(p))
    return SignedCore(L, r, a, eps, c, tuple(tuple(int(v) for v in row) for row in sigma))


# --- high-modulus assembly ----------------------------------------------------


def high_modulus_matrix(d: int, m: int) -> CountMatrix:
    """Prefix-admissible matrix for odd d >= 5 and odd m >= d."""
    if d < 5 or d % 2 == 0:
        raise UnsupportedParameters(f"construction needs odd d >= 5, got {d}")
    if m < d or m % 2 == 0:
        raise UnsupportedParameters(
            f"high-modulus construction needs odd m >= d; got m={m}, d={d}"
        )
    big_l = d - 1
    p = big_l - 1
    q, r = divmod(m, big_l)
    if q >= 2:
        c_pow = 1
        while c_pow < big_l:
            c_pow *= 2
        a = tuple(2 if i < c_pow - big_l else 1 for i in range(big_l))
        eps = tuple(1 if i < r else 0 for i in range(big_l))
        n_twos = c_pow - p
        c = tuple(1 if k < p - n_twos else 2 for k in range(p))
        core = signed_core_qge2(big_l, r, c_pow, a, eps, c)
        rows = [
            (a[i], q + eps[i]) + tuple(q + eps[i] + core.sigma[i][k] for k in range(p))
            for i in range(big_l)
        ]
        rows.append((m - c_pow, 0) + c)
    else:
        core = signed_core_q1(big_l, r)
        rows = [
            (core.a[i], 1 + core.eps[i])
            + tuple(1 + core.eps[i] + core.sigma[i][k] for k in range(p))
            for i in range(big_l)
        ]
        rows.append((1, 0) + core.c)
    matrix = CountMatrix(d, m, tuple(rows))
    ok, violations = check_admissible(matrix)
    if not ok:
        raise InternalError(f"assembled matrix inadmissible: {violations}")
    return matrix


# --- schedule compilation -----------------------------------------------------


def schedule_from_matrix(n: CountMatrix) -> Schedule:
    """Split the color-label multigraph into m matchings, one per layer."""
    ok, violations = check_admissible(n)
    if not ok:
        raise InvalidInput(f"matrix not admissible: {violations}")
    d, m = n.d, n.m
    work = [list(row) for row in n.entries]
    layers = []
    for t in range(m):
        match_label = [-1] * d

        def augment(color, seen):
            for label in range(d):
                if work[color][label] <= 0 or seen[label]:
                    continue
                seen[label] = True
                if match_label[label] == -1 or augment(match_label[label], seen):
                    match_label[label] = color
                    return True
            return False

        for color in range(d):
            if not augment(color, [False] * d):
                raise InternalError(f"no perfect matching at layer {t}")
        assignment = [-1] * d
        for label, color in enumerate(match_label):
            assignment[color] = label
            work[color][label] -= 1
        layers.append(PrefixLabelRule(tuple(assignment), t))
    if any(any(v for v in row) for row in work):
        raise InternalError("matchings did not exhaust the multigraph")
    return Schedule(Params(d, m), tuple(layers))


def matrix_decomposition(n: CountMatrix, family: str) -> Decomposition:
    """Expand a count matrix into a decomposition with a count recipe."""
    sched = schedule_from_matrix(n)
    recipe = {
        "kind": "count-schedule",
        "d": n.d,
        "m": n.m,
        "family": family,
        "matrix": [list(row) for row in n.entries],
    }
    return expand(sched, recipe=recipe)
