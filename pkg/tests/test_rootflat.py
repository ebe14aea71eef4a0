import numpy as np
import pytest

from hamdec.core import Params
from hamdec.errors import InvalidInput, MalformedCertificate, ResourceLimit
from hamdec.rootflat import (
    PrefixLabelRule,
    Schedule,
    TableRule,
    TranslationRule,
    color_return_map,
    expand,
    first_return_length,
    schedule_direction,
    verify_rf,
    zero_mask_of,
    shift_mask_of,
)
from hamdec.smalldims import construct_d3, d5_schedule
from hamdec.d7boundary import boundary_schedule
from hamdec.verify import verify_hamilton


def identity_schedule(d, m):
    return Schedule(Params(d, m), tuple(TranslationRule.cyclic(0, d) for _ in range(m)))


def test_schedule_direction_d5_examples():
    s = d5_schedule(5)
    # layer 0 is the identity translation, layer 2 the +3 translation
    assert schedule_direction(s, (0, 0, 0, 0, 0), 0) == 0
    assert schedule_direction(s, (0, 0, 0, 0, 0), 2) == 2
    x_layer2 = (2, 0, 0, 0, 0)
    for c in range(5):
        assert schedule_direction(s, x_layer2, c) == (c + 3) % 5


def test_schedule_direction_d7_boundary_offset():
    s = boundary_schedule(3)
    for c in range(7):
        assert schedule_direction(s, (0,) * 7, c) == (c + 2) % 7


def test_schedule_validation():
    with pytest.raises(InvalidInput):
        Schedule(Params(2, 3), (TranslationRule((0, 1)),))
    with pytest.raises(MalformedCertificate):
        Schedule(Params(2, 3), tuple(TranslationRule((0, 0)) for _ in range(3)))
    with pytest.raises(MalformedCertificate):
        Schedule(
            Params(3, 3),
            (
                PrefixLabelRule((0, 1, 2), 1),
                PrefixLabelRule((0, 1, 2), 1),
                PrefixLabelRule((0, 1, 2), 2),
            ),
        )
    with pytest.raises(MalformedCertificate):
        Schedule(
            Params(3, 3),
            tuple(PrefixLabelRule((0, 0, 2), t) for t in range(3)),
        )


def test_zero_mask_helpers():
    w = np.array([[0, 1, 0, 2], [1, 1, 1, 1]], dtype=np.int64)
    mask = zero_mask_of(w)
    assert list(mask) == [0b0101, 0]
    assert list(shift_mask_of(mask, 1, 4)) == [0b1010, 0]
    assert list(shift_mask_of(mask, 0, 4)) == [0b0101, 0]


def test_identity_schedule_fails_rf3():
    s = identity_schedule(2, 3)
    report = verify_rf(s, "all")
    assert report.rf1_ok and report.rf2_ok
    assert not report.ok
    assert report.rf3[0] == (False, 1)
    dec = expand(s, recipe={"kind": "schedule"})
    assert verify_hamilton(dec, 0) == 3 != 9


def test_orbit_length_law_on_broken_schedule():
    """A k-cycle return lifts to torus cycles of m times its length."""
    s = Schedule(
        Params(3, 3),
        (
            TranslationRule.cyclic(0, 3),
            TranslationRule.cyclic(0, 3),
            TranslationRule.cyclic(1, 3),
        ),
    )
    dec = expand(s, recipe={"kind": "schedule"})
    for color in range(3):
        ret = color_return_map(dec, color)
        return_len = first_return_length(ret, 0)
        assert verify_hamilton(dec, color) == 3 * return_len


@pytest.mark.parametrize("maker,m,target", [
    (boundary_schedule, 3, 3**6),
    (d5_schedule, 3, 3**4),
    (d5_schedule, 5, 5**4),
])
def test_rf_suite_passes(maker, m, target):
    report = verify_rf(maker(m), "all")
    assert report.ok
    assert all(length == target for _, length in report.rf3.values())


def test_rf_d3_style_schedule_m5():
    # A three-dimensional schedule whose return is one 25-cycle per color.
    dec = construct_d3(5)
    for color in range(3):
        ret = color_return_map(dec, color)
        assert first_return_length(ret, 0) == 25


def test_rf_budget_raises_with_partial():
    with pytest.raises(ResourceLimit) as err:
        verify_rf(d5_schedule(5), "all", budget=10)
    assert err.value.partial is not None


def test_table_rule_roundtrip_and_missing_entry():
    base = boundary_schedule(3)
    dec = expand(base, recipe={"kind": "schedule"})
    m, d = 3, 7
    n = m ** (d - 1)
    from hamdec.core import decode_grid

    # Rebuild layer 1 as an explicit table and check the suite still passes.
    free = decode_grid(np.arange(n, dtype=np.int64), d - 1, m)
    table = np.empty((n, d), dtype=np.int64)
    last = free.sum(axis=1) % m
    coords = np.concatenate([free, ((1 - last) % m)[:, None]], axis=1)
    for color in range(d):
        table[:, color] = dec.directions(coords, color)
    layers = list(base.layers)
    layers[1] = TableRule(table)
    tabled = Schedule(Params(d, m), tuple(layers))
    rep = verify_rf(tabled, "all")
    assert rep.ok

    broken = table.copy()
    broken[0, 0] = -1
    layers[1] = TableRule(broken)
    with pytest.raises(MalformedCertificate):
        verify_rf(Schedule(Params(d, m), tuple(layers)), "rf3")


def test_scalar_direction_matches_batch():
    dec = construct_d3(5)
    rng = np.random.default_rng(7)
    coords = rng.integers(0, 5, size=(40, 3))
    for color in range(3):
        dirs = dec.directions(coords, color)
        for row in range(40):
            assert dec.direction(tuple(int(v) for v in coords[row]), color) == int(dirs[row])


def test_d3_table_as_root_flat_schedule():
    """The vertex-level three-dimensional table, re-expressed as explicit
    per-layer root-state tables, expands to the same coloring pointwise."""
    from hamdec.core import decode_grid, vertex_of, prefix_of

    m = 3
    dec = construct_d3(m)
    n = m**2
    layers = []
    for t in range(m):
        idx = np.arange(n, dtype=np.int64)
        z = decode_grid(idx, 2, m)
        coords = vertex_of(np.full(n, t, dtype=np.int64), z, m)
        w = coords.copy()
        w[:, 2] = (w[:, 2] - t) % m
        root_idx = __import__("hamdec.core", fromlist=["encode_grid"]).encode_grid(
            w[:, :2], m
        )
        table = np.full((n, 3), -1, dtype=np.int64)
        for color in range(3):
            table[root_idx, color] = dec.directions(coords, color)
        layers.append(TableRule(table))
    sched = Schedule(Params(3, m), tuple(layers))
    expanded = expand(sched, recipe={"kind": "schedule", "d": 3, "m": m})
    idx = np.arange(m**3, dtype=np.int64)
    coords = decode_grid(idx, 3, m)
    for color in range(3):
        assert np.array_equal(
            expanded.directions(coords, color), dec.directions(coords, color)
        )


def test_expand_rf_pass_implies_full_verify():
    """The computational shadow of the certificate theorem on one instance."""
    from hamdec.verify import verify_decomposition

    s = d5_schedule(3)
    assert verify_rf(s, "all").ok
    report = verify_decomposition(expand(s, recipe={"kind": "schedule", "d": 5, "m": 3}))
    assert report.passed
