import itertools

import numpy as np
import pytest

from hamdec.core import (
    LayerPrefixPoint,
    Params,
    apply_stop,
    decode_grid,
    encode_grid,
    from_layer_prefix,
    layer_sum,
    prefix_decrement,
    prefix_of,
    to_layer_prefix,
    vertex_of,
)
from hamdec.errors import InvalidInput


def test_layer_sum_examples():
    assert layer_sum((1, 1, 1), Params(3, 3)) == 0
    assert layer_sum((1, 0, 0, 1, 1), Params(5, 3)) == 0
    assert layer_sum((2, 4), Params(2, 5)) == 1


def test_layer_sum_rejects_bad_input():
    with pytest.raises(InvalidInput):
        layer_sum((1, 1), Params(3, 3))
    with pytest.raises(InvalidInput):
        layer_sum((1, 1, 3), Params(3, 3))


def test_to_layer_prefix_examples():
    assert to_layer_prefix((0, 0, 0), Params(3, 3)) == (0, (0, 0))
    assert to_layer_prefix((1, 0, 0), Params(3, 3)) == (1, (2, 2))
    assert to_layer_prefix((1, 0, 0, 1, 1), Params(5, 3)) == (0, (1, 2, 2, 2))


def test_from_layer_prefix_examples():
    assert from_layer_prefix(LayerPrefixPoint(0, (0,)), Params(2, 3)) == (0, 0)
    assert from_layer_prefix(LayerPrefixPoint(1, (2, 2)), Params(3, 3)) == (1, 0, 0)


@pytest.mark.parametrize("d,m", [(2, 3), (3, 5), (4, 5), (5, 3)])
def test_round_trip_exhaustive(d, m):
    p = Params(d, m)
    for x in itertools.product(range(m), repeat=d):
        assert from_layer_prefix(to_layer_prefix(x, p), p) == x


def test_apply_stop_examples():
    p = Params(3, 3)
    assert apply_stop(LayerPrefixPoint(0, (0, 0)), 0, p) == (1, (0, 0))
    assert apply_stop(LayerPrefixPoint(0, (0, 0)), 2, p) == (1, (2, 2))
    with pytest.raises(InvalidInput):
        apply_stop(LayerPrefixPoint(0, (0, 0)), 3, p)


@pytest.mark.parametrize("d,m", [(2, 4), (3, 3), (4, 3), (3, 5)])
def test_stop_matches_torus_step(d, m):
    p = Params(d, m)
    for x in itertools.product(range(m), repeat=d):
        q = to_layer_prefix(x, p)
        for i in range(d):
            y = list(x)
            y[i] = (y[i] + 1) % m
            assert to_layer_prefix(tuple(y), p) == apply_stop(q, d - 1 - i, p)
            assert layer_sum(tuple(y), p) == (layer_sum(x, p) + 1) % m


@pytest.mark.parametrize("d,m", [(3, 4), (5, 3), (2, 11), (6, 3)])
def test_batch_matches_scalar(d, m):
    p = Params(d, m)
    n = m**d
    idx = np.arange(n, dtype=np.int64)
    coords = decode_grid(idx, d, m)
    assert np.array_equal(encode_grid(coords, m), idx)
    t, z = prefix_of(coords, m)
    assert np.array_equal(vertex_of(t, z, m), coords)
    for row in (0, n // 2, n - 1):
        x = tuple(int(v) for v in coords[row])
        lp = to_layer_prefix(x, p)
        assert lp.layer == int(t[row])
        assert lp.prefix == tuple(int(v) for v in z[row])


def test_prefix_decrement_matches_apply_stop():
    p = Params(5, 7)
    z = np.array([[3, 1, 0, 6], [0, 0, 0, 0]], dtype=np.int64)
    ranks = np.array([2, 4], dtype=np.int64)
    out = prefix_decrement(z, ranks, 7)
    for row in range(2):
        q = apply_stop(LayerPrefixPoint(0, tuple(int(v) for v in z[row])), int(ranks[row]), p)
        assert tuple(int(v) for v in out[row]) == q.prefix


def test_params_validation():
    with pytest.raises(InvalidInput):
        Params(1, 3)
    with pytest.raises(InvalidInput):
        Params(3, 1)
    assert Params(2, 2).n_vertices == 4
    assert Params(3, 5).n_root_states == 25
