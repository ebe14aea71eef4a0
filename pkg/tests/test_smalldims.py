import numpy as np
import pytest

from hamdec import tables
from hamdec.core import decode_grid, encode_grid
from hamdec.errors import InvalidInput, UnsupportedParameters
from hamdec.smalldims import (
    construct_d2,
    construct_d3,
    construct_d5,
    d3_direction,
    d3_odometer,
    d3_psi,
    d3_return,
    d3_simulate_return,
    d5_exact_cover_check,
    d5_first_return,
    d5_g_batch,
    d5_g_step,
    d5_schedule,
    d5_selector,
    d5_selector_theta,
    d5_simulate_first_return,
    lambda1_row,
)
from hamdec.rootflat import verify_rf
from hamdec.smalldims import _zero_set_cover_counts
from hamdec.verify import orbit_single_cycle, verify_arc_partition, verify_hamilton


# --- dimension two ----------------------------------------------------------


def test_d2_phase_rule():
    dec = construct_d2(3)
    assert dec.direction((0, 0), 0) == 0
    assert dec.direction((2, 0), 0) == 1
    assert dec.direction((2, 0), 1) == 0


@pytest.mark.parametrize("m", [2, 3, 4, 5, 9])
def test_d2_both_factors_hamilton(m):
    dec = construct_d2(m)
    assert verify_arc_partition(dec)
    for color in (0, 1):
        assert verify_hamilton(dec, color) == m * m


# --- dimension three --------------------------------------------------------


def test_d3_table_rows():
    m = 7
    x0 = (0, 0, 0)
    assert [d3_direction(x0, c, m) for c in range(3)] == [0, 2, 1]
    x = (0, 1, 0)  # S = 1, K = 0
    assert [d3_direction(x, c, m) for c in range(3)] == [2, 0, 1]
    x = (0, 0, 1)  # S = 1, K != 0
    assert [d3_direction(x, c, m) for c in range(3)] == [2, 1, 0]
    x = (1, 0, 1)  # S = 2
    assert [d3_direction(x, c, m) for c in range(3)] == [0, 1, 2]


def test_d3_return_examples():
    m = 9
    assert d3_return(0, 0, 0, m) == (m - 1, 1)
    assert d3_return(1, 4, m - 1, m) == (5, 0)
    assert d3_return(2, 0, 0, m) == (0, m - 2)


@pytest.mark.parametrize("m", [3, 5, 7])
def test_d3_return_matches_simulation(m):
    for c in range(3):
        for i in range(m):
            for k in range(m):
                assert d3_return(c, i, k, m) == d3_simulate_return(c, i, k, m)


@pytest.mark.parametrize("m", [3, 5, 7])
def test_d3_odometer_conjugacy(m):
    for c in range(3):
        for i in range(m):
            for k in range(m):
                lhs = d3_psi(c, *d3_return(c, i, k, m), m)
                rhs = d3_odometer(*d3_psi(c, i, k, m), m)
                assert lhs == rhs


@pytest.mark.parametrize("m", range(3, 16, 2))
def test_d3_odometer_single_cycle(m):
    def step(v):
        a, b = divmod(v, m)
        a2, b2 = d3_odometer(a, b, m)
        return a2 * m + b2

    single, length = orbit_single_cycle(step, m * m)
    assert single and length == m * m


@pytest.mark.parametrize("m", [3, 9])
def test_d3_hamilton(m):
    dec = construct_d3(m)
    assert verify_arc_partition(dec)
    for color in range(3):
        assert verify_hamilton(dec, color) == m**3


def test_d3_rejects_even_modulus():
    with pytest.raises(UnsupportedParameters):
        construct_d3(4)


# --- dimension five ---------------------------------------------------------


def test_d5_selector_examples():
    assert d5_selector(()) == 0
    assert d5_selector((3,)) == 4
    assert d5_selector((2, 4)) == 3
    with pytest.raises(InvalidInput):
        d5_selector((0, 1, 2, 3))


def test_d5_selector_matches_cyclic_rule_everywhere():
    # d5_selector cross-checks the stored table against the shifted
    # representative rows internally; exercise all 27 feasible sets.
    for zs in tables.D5_SELECTOR:
        assert d5_selector(zs) == tables.D5_SELECTOR[zs]


def test_lambda1_representative_rows():
    for rep, row in tables.D5_LAMBDA1_ROWS.items():
        assert lambda1_row(rep) == row
    # Equivariance: row(U+k)(a+k) = row(U)(a) + k.
    row01 = lambda1_row((0, 1))
    row12 = lambda1_row((1, 2))
    for a in range(5):
        assert row12[(a + 1) % 5] == (row01[a] + 1) % 5


def test_d5_g_step_on_zero_state():
    assert d5_g_step((0, 0, 0, 0, 0), 3) == (1, 0, 0, 1, 1)


@pytest.mark.parametrize("m", [3, 5, 7, 9, 11, 13])
def test_d5_exact_cover(m):
    assert d5_exact_cover_check(m)


def test_d5_exact_cover_breaks_under_perturbation():
    theta = list(d5_selector_theta())
    a, b = 1 << 3, 1 << 4  # masks of {3} and {4}, selector values 4 and 1
    assert theta[a] != theta[b]
    theta[a], theta[b] = theta[b], theta[a]
    counts = _zero_set_cover_counts(tuple(theta), 5, 3)
    assert not counts.all()


@pytest.mark.parametrize("m", [3, 5, 7, 9, 11, 13])
def test_d5_layer_map_bijective(m):
    """P(w) = w + q_{p(Z(w))} covers the root flat exactly once."""
    theta = np.asarray(d5_selector_theta(), dtype=np.int64)
    n = m**4
    free = decode_grid(np.arange(n, dtype=np.int64), 4, m)
    last = (-free.sum(axis=1)) % m
    mask = np.zeros(n, dtype=np.int64)
    for j in range(4):
        mask |= (free[:, j] == 0).astype(np.int64) << j
    mask |= (last == 0).astype(np.int64) << 4
    p = theta[mask]
    assert np.all(p >= 0)
    nxt = free.copy()
    for i in range(4):
        sel = p == i
        nxt[sel, i] = (nxt[sel, i] + 1) % m
    images = encode_grid(nxt, m)
    assert np.all(np.bincount(images, minlength=n) == 1)


@pytest.mark.parametrize("m,target", [(3, 243), (5, 3125)])
def test_d5_hamilton(m, target):
    dec = construct_d5(m)
    assert verify_arc_partition(dec)
    for color in range(5):
        assert verify_hamilton(dec, color) == target


def test_d5_three_layer_maps_bijective():
    assert verify_rf(d5_schedule(3), "rf2").rf2_ok


def test_d5_m3_orbit_reproduces_embedded_cycle():
    w = (0, 0, 0, 0, 0)
    for r in range(81):
        assert w[:4] == tables.D5_M3_CYCLE[r]
        w = d5_g_step(w, 3)
    assert w == (0, 0, 0, 0, 0)


def test_d5_g_batch_matches_scalar():
    m = 5
    states = decode_grid(np.arange(50, dtype=np.int64), 4, m)
    full = np.concatenate([states, ((-states.sum(axis=1)) % m)[:, None]], axis=1)
    out = d5_g_batch(full, m)
    for row in range(50):
        w = tuple(int(v) for v in full[row])
        assert tuple(int(v) for v in out[row]) == d5_g_step(w, m)


def test_d5_first_return_worked_example():
    assert d5_first_return(1, 2, 5) == (3, 3, 40)
    assert d5_simulate_first_return(1, 2, 5) == (3, 3, 40)
    # s = h row: returns after 2(h+1)m steps with a fixed.
    m, h = 5, 2
    a, b = 1, 1  # s = 2 = h
    ap, bp, length = d5_first_return(a, b, m)
    assert ap == a and length == 2 * (h + 1) * m


@pytest.mark.parametrize("m", [5, 7])
def test_d5_first_return_matches_simulation(m):
    total = 0
    for a in range(m):
        for b in range(m):
            if (a + b) % m == 0:
                continue
            closed = d5_first_return(a, b, m)
            assert closed == d5_simulate_first_return(a, b, m)
            total += closed[2]
    assert total == m**4


def test_d5_first_return_rejects_off_section():
    with pytest.raises(InvalidInput):
        d5_first_return(1, 4, 5)  # a + b = 0, includes the excluded (1, m-1)
    with pytest.raises(InvalidInput):
        d5_first_return(0, 0, 5)
    with pytest.raises(UnsupportedParameters):
        d5_first_return(1, 2, 3)


def test_d5_rejects_even_modulus():
    with pytest.raises(UnsupportedParameters):
        construct_d5(6)
