"""Embedded finite tables used by the constructions and their tests.

This module is the single in-package store for the finite certificate data:
the dimension-five cyclic selector and its 27-cell cover signatures, the
81-step return cycle at modulus three, the dimension-seven selector tables
and constant offsets for the boundary moduli, the explicit seven-dimensional
count matrix at modulus seven, the worked five-dimensional count matrix at
modulus nine, and the ten-row signed table closing the L=4 case of the
signed binary-layer construction.  Everything is exact integer data.
"""

from __future__ import annotations

# --- dimension five -------------------------------------------------------

# Representative rows of the cyclic Latin selector table; all other feasible
# zero sets are reached by the equivariance row(U+k)(a+k) = row(U)(a)+k.
D5_LAMBDA1_ROWS: dict[tuple[int, ...], tuple[int, ...]] = {
    (): (0, 1, 2, 3, 4),
    (0,): (0, 1, 3, 2, 4),
    (0, 1): (4, 1, 3, 2, 0),
    (0, 2): (4, 1, 3, 0, 2),
    (0, 1, 2): (1, 0, 3, 4, 2),
    (0, 1, 3): (4, 3, 0, 2, 1),
    (0, 1, 2, 3, 4): (0, 1, 2, 3, 4),
}

# The color-0 selector p(Z) on all 27 feasible root-flat zero sets.
D5_SELECTOR: dict[tuple[int, ...], int] = {
    (): 0,
    (0,): 0,
    (1,): 0,
    (2,): 0,
    (3,): 4,
    (4,): 1,
    (0, 1): 0,
    (0, 2): 0,
    (0, 3): 2,
    (0, 4): 1,
    (1, 2): 4,
    (1, 3): 4,
    (1, 4): 1,
    (2, 3): 1,
    (2, 4): 3,
    (3, 4): 4,
    (0, 1, 2): 4,
    (0, 1, 3): 2,
    (0, 1, 4): 1,
    (0, 2, 3): 2,
    (0, 2, 4): 3,
    (0, 3, 4): 1,
    (1, 2, 3): 1,
    (1, 2, 4): 4,
    (1, 3, 4): 4,
    (2, 3, 4): 3,
    (0, 1, 2, 3, 4): 0,
}

# Image-cell signatures of P(w) = w + q_{p(Z(w))}: per zero set, the forced
# coordinate equalities and the forbidden ones, with values read mod m
# (-1 stands for m-1).  The 27 cells are pairwise disjoint and cover the
# root flat, which is the exact-cover form of the matching condition.
D5_CELL_SIGNATURES: tuple[
    tuple[tuple[int, ...], int, tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]],
    ...,
] = (
    ((), 0, (), ((0, 1), (4, -1), (1, 0), (2, 0), (3, 0))),
    ((0,), 0, ((0, 1),), ((4, -1), (1, 0), (2, 0), (3, 0))),
    ((1,), 0, ((1, 0),), ((0, 1), (4, -1), (2, 0), (3, 0))),
    ((2,), 0, ((2, 0),), ((0, 1), (4, -1), (1, 0), (3, 0))),
    ((3,), 4, ((3, 0),), ((0, 0), (1, 0), (2, 0), (4, 0))),
    ((4,), 1, ((4, -1),), ((1, 1), (0, 0), (2, 0), (3, 0))),
    ((0, 1), 0, ((0, 1), (1, 0)), ((4, -1), (2, 0), (3, 0))),
    ((0, 2), 0, ((0, 1), (2, 0)), ((4, -1), (1, 0), (3, 0))),
    ((0, 3), 2, ((0, 0), (3, 0)), ((2, 1), (4, -1), (1, 0))),
    ((0, 4), 1, ((4, -1), (0, 0)), ((1, 1), (2, 0), (3, 0))),
    ((1, 2), 4, ((1, 0), (2, 0)), ((0, 0), (3, 0), (4, 0))),
    ((1, 3), 4, ((1, 0), (3, 0)), ((0, 0), (2, 0), (4, 0))),
    ((1, 4), 1, ((1, 1), (4, -1)), ((0, 0), (2, 0), (3, 0))),
    ((2, 3), 1, ((2, 0), (3, 0)), ((1, 1), (4, -1), (0, 0))),
    ((2, 4), 3, ((4, -1), (2, 0)), ((3, 1), (0, 0), (1, 0))),
    ((3, 4), 4, ((3, 0), (4, 0)), ((0, 0), (1, 0), (2, 0))),
    ((0, 1, 2), 4, ((0, 0), (1, 0), (2, 0)), ((3, 0), (4, 0))),
    ((0, 1, 3), 2, ((0, 0), (1, 0), (3, 0)), ((2, 1), (4, -1))),
    ((0, 1, 4), 1, ((1, 1), (4, -1), (0, 0)), ((2, 0), (3, 0))),
    ((0, 2, 3), 2, ((2, 1), (0, 0), (3, 0)), ((4, -1), (1, 0))),
    ((0, 2, 4), 3, ((4, -1), (0, 0), (2, 0)), ((3, 1), (1, 0))),
    ((0, 3, 4), 1, ((4, -1), (0, 0), (3, 0)), ((1, 1), (2, 0))),
    ((1, 2, 3), 1, ((1, 1), (2, 0), (3, 0)), ((4, -1), (0, 0))),
    ((1, 2, 4), 4, ((1, 0), (2, 0), (4, 0)), ((0, 0), (3, 0))),
    ((1, 3, 4), 4, ((1, 0), (3, 0), (4, 0)), ((0, 0), (2, 0))),
    ((2, 3, 4), 3, ((3, 1), (4, -1), (2, 0)), ((0, 0), (1, 0))),
    ((0, 1, 2, 3, 4), 0, ((0, 1), (4, -1), (1, 0), (2, 0), (3, 0)), ()),
)

# The 81-step cycle of the normalised return at m=3, listed by the first
# four coordinates; the fifth is recovered from the zero-sum relation.
D5_M3_CYCLE: tuple[tuple[int, int, int, int], ...] = (
    (0, 0, 0, 0), (1, 0, 0, 1), (1, 0, 0, 2),
    (1, 0, 0, 0), (1, 1, 0, 1), (1, 1, 0, 0),
    (1, 2, 0, 1), (2, 2, 0, 2), (2, 2, 0, 1),
    (0, 2, 0, 2), (1, 2, 0, 0), (1, 2, 0, 2),
    (2, 2, 0, 0), (2, 0, 0, 1), (2, 0, 0, 2),
    (2, 0, 0, 0), (2, 1, 0, 1), (0, 1, 0, 2),
    (0, 1, 0, 1), (1, 1, 0, 2), (2, 1, 0, 0),
    (2, 1, 0, 2), (0, 1, 0, 0), (0, 1, 1, 1),
    (0, 2, 1, 2), (1, 2, 1, 0), (1, 2, 1, 1),
    (2, 2, 1, 2), (0, 2, 1, 0), (0, 0, 1, 1),
    (1, 0, 1, 2), (2, 0, 1, 0), (2, 0, 1, 1),
    (0, 0, 1, 2), (0, 1, 1, 0), (0, 1, 2, 1),
    (1, 1, 2, 2), (1, 2, 2, 0), (1, 2, 2, 1),
    (1, 0, 2, 2), (2, 0, 2, 0), (2, 0, 2, 1),
    (0, 0, 2, 2), (1, 0, 2, 0), (1, 0, 2, 1),
    (2, 0, 2, 2), (2, 1, 2, 0), (2, 1, 2, 1),
    (2, 2, 2, 2), (0, 2, 2, 0), (0, 2, 0, 1),
    (0, 2, 0, 0), (0, 2, 1, 1), (1, 2, 1, 2),
    (1, 0, 1, 0), (1, 0, 1, 1), (1, 1, 1, 2),
    (2, 1, 1, 0), (2, 1, 1, 1), (0, 1, 1, 2),
    (1, 1, 1, 0), (1, 1, 1, 1), (2, 1, 1, 2),
    (2, 2, 1, 0), (2, 2, 1, 1), (2, 0, 1, 2),
    (0, 0, 1, 0), (0, 0, 2, 1), (0, 1, 2, 2),
    (1, 1, 2, 0), (1, 1, 2, 1), (2, 1, 2, 2),
    (0, 1, 2, 0), (0, 2, 2, 1), (1, 2, 2, 2),
    (2, 2, 2, 0), (2, 2, 2, 1), (0, 2, 2, 2),
    (0, 0, 2, 0), (0, 0, 0, 1), (0, 0, 0, 2),
)

# --- dimension seven boundary compilers ------------------------------------

# Constant translation offsets per layer; layer 1 is the selector layer and
# its entry is unused.
D7_ALPHA3: tuple[int, ...] = (2, 0, 4)
D7_ALPHA5: tuple[int, ...] = (1, 0, 2, 5, 6)

# Selector values indexed by the zero mask, 128 entries each.
D7_THETA3: tuple[int, ...] = (
    3, 6, 6, 4, 5, 1, 4, 1, 3, 2, 0, 0, 1, 2, 1, 6,
    6, 3, 5, 4, 0, 0, 4, 6, 1, 3, 1, 2, 0, 0, 6, 2,
    6, 1, 3, 1, 5, 3, 4, 4, 0, 0, 3, 2, 1, 3, 1, 2,
    6, 1, 5, 1, 0, 0, 4, 4, 0, 0, 6, 6, 6, 1, 6, 0,
    3, 6, 6, 2, 0, 0, 3, 2, 3, 5, 5, 4, 4, 5, 3, 6,
    6, 3, 5, 5, 5, 5, 5, 6, 1, 3, 1, 4, 4, 1, 6, 0,
    6, 4, 0, 0, 3, 1, 3, 1, 4, 5, 5, 2, 3, 5, 3, 0,
    6, 4, 5, 5, 5, 5, 5, 0, 4, 2, 6, 0, 6, 0, 0, 3,
)

D7_THETA5: tuple[int, ...] = (
    4, 3, 0, 0, 0, 0, 0, 0, 4, 3, 2, 2, 0, 0, 2, 2,
    4, 3, 5, 5, 0, 0, 5, 5, 4, 3, 0, 0, 1, 1, 1, 1,
    0, 0, 0, 0, 0, 0, 0, 0, 2, 4, 0, 0, 2, 1, 4, 1,
    0, 0, 5, 5, 0, 0, 5, 5, 1, 4, 1, 2, 0, 0, 4, 0,
    3, 1, 2, 1, 0, 0, 2, 5, 3, 1, 2, 1, 5, 5, 2, 4,
    1, 1, 1, 1, 0, 0, 3, 5, 2, 5, 0, 0, 2, 5, 3, 0,
    2, 1, 3, 1, 2, 4, 3, 5, 4, 1, 3, 1, 5, 5, 3, 0,
    1, 1, 1, 1, 1, 4, 1, 0, 4, 5, 0, 0, 1, 0, 0, 4,
)

# --- count matrices ---------------------------------------------------------

# The explicit seven-admissible count matrix at m=7; columns 0, Delta, 2..6.
D7_COUNT_MATRIX_M7: tuple[tuple[int, ...], ...] = (
    (1, 2, 0, 0, 0, 0, 4),
    (1, 2, 0, 0, 0, 3, 1),
    (1, 1, 0, 0, 3, 2, 0),
    (1, 1, 0, 3, 2, 0, 0),
    (1, 1, 3, 2, 0, 0, 0),
    (1, 0, 2, 1, 1, 1, 1),
    (1, 0, 2, 1, 1, 1, 1),
)

# Worked five-dimensional count matrix at m=9; columns 0, Delta, 2, 3, 4.
D5_M9_COUNT_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 3, 2, 2, 1),
    (1, 2, 0, 3, 3),
    (1, 2, 3, 0, 3),
    (1, 2, 3, 3, 0),
    (5, 0, 1, 1, 2),
)

# --- signed binary-layer data for L = 4 ------------------------------------

# Ten rows keyed by (r, A2, x) with row-class sizes (|F1|, |F2|, |E1|, |E2|)
# and the three signed columns, read in class order: F1 rows, F2 rows,
# E1 rows, E2 rows.  Columns with column sum -1 precede those with sum -2.
SIGNED_L4_TABLE: dict[
    tuple[int, int, int],
    tuple[tuple[int, int, int, int], tuple[tuple[int, ...], ...]],
] = {
    (1, 0, 0): ((3, 0, 1, 0), ((-2, 1, 1, -1), (1, -2, 1, -1), (1, 1, -2, -2))),
    (1, 1, 0): ((2, 1, 1, 0), ((-2, 2, 1, -2), (1, -1, -1, -1), (1, -1, -1, -1))),
    (1, 1, 1): ((3, 0, 0, 1), ((-2, 1, 1, -1), (1, -2, 1, -2), (1, 1, -2, -2))),
    (1, 2, 0): ((1, 2, 1, 0), ((-2, -1, 2, -1), (1, -1, -1, -1), (1, 1, -2, -2))),
    (1, 2, 1): ((2, 1, 0, 1), ((-1, -1, 1, -1), (-1, 2, -1, -2), (2, -1, -1, -2))),
    (3, 0, 0): ((1, 0, 3, 0), ((-2, -2, 1, 2), (2, 1, -2, -2), (2, -1, -1, -2))),
    (3, 1, 0): ((0, 1, 3, 0), ((-2, -2, 1, 2), (1, 1, -2, -2), (2, -1, -1, -2))),
    (3, 1, 1): ((1, 0, 2, 1), ((-2, 1, 1, -1), (2, -2, -1, -1), (2, -1, -2, -1))),
    (3, 2, 1): ((0, 1, 2, 1), ((-2, -2, 1, 1), (1, 1, -2, -2), (2, -1, -1, -2))),
    (3, 2, 2): ((1, 0, 1, 2), ((-2, 2, -1, -1), (2, -2, -1, -1), (2, -2, -1, -1))),
}
