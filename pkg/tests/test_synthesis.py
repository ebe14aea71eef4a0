import json

import pytest

from hamdec.errors import UnsupportedParameters
from hamdec.synthesis import (
    composite_lift,
    dyadic_triadic_base,
    from_recipe,
    plan,
    synthesize,
)
from hamdec.verify import verify_decomposition, verify_structural


def test_plan_examples():
    p43 = plan(4, 3)
    assert p43["kind"] == "composite" and (p43["a"], p43["b"]) == (2, 2)
    assert p43["children"][0] == {"kind": "base", "d": 2, "m": 3}
    assert p43["children"][1] == {"kind": "base", "d": 2, "m": 9}

    p113 = plan(11, 3)
    assert p113["kind"] == "successor" and p113["b"] == 5
    assert p113["child"] == {"kind": "base", "d": 5, "m": 3}

    assert plan(11, 13) == {"kind": "count", "d": 11, "m": 13}

    p103 = plan(10, 3)
    assert (p103["a"], p103["b"]) == (2, 5)
    assert p103["children"][1] == {"kind": "base", "d": 5, "m": 9}

    assert plan(7, 3) == {"kind": "boundary7", "m": 3}
    assert plan(7, 9) == {"kind": "count", "d": 7, "m": 9}

    p9 = plan(9, 11)
    assert p9["kind"] == "composite" and (p9["a"], p9["b"]) == (3, 3)
    assert p9["children"][1]["m"] == 11**3


def test_plan_rejects_even_modulus_above_two():
    with pytest.raises(UnsupportedParameters):
        plan(3, 4)
    with pytest.raises(UnsupportedParameters):
        plan(11, 6)
    assert plan(2, 4)["kind"] == "base"


def test_dyadic_triadic_base_values():
    assert dyadic_triadic_base(29) == 12
    assert dyadic_triadic_base(35) == 16
    assert dyadic_triadic_base(11) == 4
    for d in range(5, 100, 2):
        b = dyadic_triadic_base(d)
        assert d / 3 < b < d / 2


def test_alternate_base_plan():
    tree = plan(29, 3, alternate_base=True)
    assert tree["kind"] == "dyadic" and tree["b"] == 12
    # Default path never uses it.
    assert plan(29, 3)["kind"] == "successor"


@pytest.mark.parametrize(
    "d,m,target",
    [(4, 3, 81), (6, 3, 729), (9, 3, 19683)],
)
def test_composite_grid_points(d, m, target):
    report = verify_decomposition(synthesize(d, m))
    assert report.passed
    assert set(report.cycle_lengths.values()) == {target}


def test_composite_lift_rejects_wrong_modulus():
    from hamdec.errors import InvalidInput

    a = synthesize(2, 3)
    b = synthesize(3, 3)
    with pytest.raises(InvalidInput):
        composite_lift(a, b)


def test_successor_structural_m9():
    dec = synthesize(11, 9)
    report = verify_structural(dec)
    assert report.passed
    names = {name for name, ok, _ in report.checks}
    assert "trade-threshold" in names and "tail-counts" in names


def test_recipe_determinism():
    r1 = synthesize(11, 3).recipe
    r2 = synthesize(11, 3).recipe
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
    assert r1["kind"] == "successor-lift" and r1["b"] == 5
    assert plan(10, 5) == plan(10, 5)


def test_from_recipe_round_trip():
    for d, m in [(5, 3), (7, 3), (7, 9), (4, 3), (11, 3)]:
        dec = synthesize(d, m)
        rebuilt = from_recipe(dec.recipe)
        assert rebuilt.params == dec.params
        # Spot agreement of the oracles on a fixed sample of vertices.
        import numpy as np

        rng = np.random.default_rng(1)
        coords = rng.integers(0, m, size=(64, d))
        for color in range(d):
            assert np.array_equal(
                dec.directions(coords, color), rebuilt.directions(coords, color)
            )


def test_plan_termination_and_scope():
    # Child dimensions strictly decrease along any plan branch.
    def depth(node, seen=0):
        assert seen < 12
        kids = node.get("children", [])
        if "child" in node:
            kids = kids + [node["child"]]
        return 1 + max((depth(k, seen + 1) for k in kids), default=0)

    for d in range(2, 30):
        for m in (3, 5, 9):
            depth(plan(d, m))
