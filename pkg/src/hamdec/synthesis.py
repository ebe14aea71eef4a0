"""Top-level dispatcher: base cases, product closure, successor closure.

Every dimension reduces to the solved set {2, 3, 5, 7}: even dimensions and
nine split as Cartesian products, odd dimensions of at least eleven use the
count construction when the modulus allows and otherwise lift from the base
dimension (d-1)/2.  Plans are deterministic, so identical inputs produce
byte-identical recipes, and every intermediate decomposition is verified
before the synthesis consumes it.
"""

from __future__ import annotations

import numpy as np

from .core import Params, encode_grid
from .errors import (
    CertificateFailure,
    InvalidInput,
    ResourceLimit,
    UnsupportedParameters,
)
from .lift import (
    base_cylinder,
    choose_trade_vertices,
    lift_decomposition,
    realize_residues,
    universal_residue,
)
from .rootflat import Decomposition
from .verify import DEFAULT_BUDGET, verify_decomposition

__all__ = [
    "plan",
    "synthesize",
    "composite_lift",
    "successor_lift",
    "dyadic_triadic_base",
    "from_recipe",
]


def _check_params(d: int, m: int) -> None:
    if d < 2:
        raise UnsupportedParameters(f"dimension must be >= 2, got {d}")
    if d == 2:
        if m < 2:
            raise UnsupportedParameters(f"modulus must be >= 2, got {m}")
    elif m < 3 or m % 2 == 0:
        raise UnsupportedParameters(
            f"dimension {d} requires an odd modulus m >= 3, got {m}"
        )


def plan(d: int, m: int, alternate_base: bool = False) -> dict:
    """The recipe tree for (d, m), before any construction runs.

    ``alternate_base`` switches odd d >= 29 at m < d to the power-of-two-
    times-three base selector instead of the successor base (d-1)/2; it is
    an optional strategy, never the default.
    """
    _check_params(d, m)
    if d == 2:
        return {"kind": "base", "d": 2, "m": m}
    if d in (3, 5):
        return {"kind": "base", "d": d, "m": m}
    if d == 7:
        if m in (3, 5):
            return {"kind": "boundary7", "m": m}
        return {"kind": "count", "d": 7, "m": m}
    if d % 2 == 0:
        half = d // 2
        return {
            "kind": "composite",
            "a": 2,
            "b": half,
            "m": m,
            "children": [plan(2, m), plan(half, m * m)],
        }
    if d == 9:
        return {
            "kind": "composite",
            "a": 3,
            "b": 3,
            "m": m,
            "children": [plan(3, m), plan(3, m**3)],
        }
    if m >= d:
        return {"kind": "count", "d": d, "m": m}
    if alternate_base and d >= 29:
        b = dyadic_triadic_base(d)
        return {"kind": "dyadic", "b": b, "d": d, "m": m, "child": plan(b, m)}
    b = (d - 1) // 2
    return {"kind": "successor", "b": b, "d": d, "m": m, "child": plan(b, m)}


def dyadic_triadic_base(d: int) -> int:
    """Largest 2^a * 3^b below d/2; always lands above d/3.

    Optional alternate base selector for odd d >= 29; the default synthesis
    never uses it.
    """
    if d < 5 or d % 2 == 0:
        raise InvalidInput(f"base selector needs odd d >= 5, got {d}")
    candidates = []
    v = 1
    while v <= d:
        w = v
        while w <= d:
            candidates.append(w)
            w *= 3
        v *= 2
    best = max(c for c in candidates if 2 * c < d)
    if 3 * best <= d:
        raise CertificateFailure(f"interval (d/3, d/2) misses all 2^a 3^b at d={d}")
    return best


def synthesize(
    d: int,
    m: int,
    budget: int = DEFAULT_BUDGET,
    verify_intermediate: bool = True,
    alternate_base: bool = False,
) -> Decomposition:
    """Execute the plan for (d, m), verifying children before use."""
    return _execute(plan(d, m, alternate_base), budget, verify_intermediate)


def _verified(dec: Decomposition, budget: int, enabled: bool):
    if not enabled:
        class _Waived:
            passed = True
            mode = "waived"

        return _Waived()
    report = verify_decomposition(dec, "auto", budget)
    if not report.passed:
        raise CertificateFailure(
            f"intermediate D_{dec.params.d}({dec.params.m}) failed {report.mode} verification"
        )
    return report


def _execute(node: dict, budget: int, verify_intermediate: bool) -> Decomposition:
    kind = node["kind"]
    if kind == "base":
        return _base_case(node["d"], node["m"])
    if kind == "boundary7":
        from .d7boundary import boundary_decomposition

        return boundary_decomposition(node["m"])
    if kind == "count":
        from .countmatrix import d7_matrix, high_modulus_matrix, matrix_decomposition

        d, m = node["d"], node["m"]
        if d == 7:
            return matrix_decomposition(d7_matrix(m), "d7-parametric")
        return matrix_decomposition(high_modulus_matrix(d, m), "high-modulus")
    if kind == "composite":
        dec_a = _execute(node["children"][0], budget, verify_intermediate)
        dec_b = _execute(node["children"][1], budget, verify_intermediate)
        _verified(dec_a, budget, verify_intermediate)
        _verified(dec_b, budget, verify_intermediate)
        return composite_lift(dec_a, dec_b)
    if kind in ("successor", "dyadic"):
        base = _execute(node["child"], budget, verify_intermediate)
        report = _verified(base, budget, verify_intermediate)
        if kind == "successor":
            return successor_lift(node["b"], node["m"], base, report)
        return _dyadic_lift(node["d"], node["b"], node["m"], base, report)
    raise InvalidInput(f"unknown plan node {kind!r}")


def _base_case(d: int, m: int) -> Decomposition:
    from .smalldims import construct_d2, construct_d3, construct_d5

    if d == 2:
        return construct_d2(m)
    if d == 3:
        return construct_d3(m)
    if d == 5:
        return construct_d5(m)
    raise InvalidInput(f"no base construction at dimension {d}")


def composite_lift(dec_a: Decomposition, dec_b: Decomposition) -> Decomposition:
    """Combine D_a(m) and D_b(m^a) into D_{ab}(m).

    Each factor of the first decomposition spans the blocks of the product;
    color (i, f) advances, at every step, the block selected by factor f of
    the second decomposition, read at the tuple of block positions along
    factor i.  Colors are numbered i*b + f.
    """
    a, m = dec_a.params.d, dec_a.params.m
    b, m_b = dec_b.params.d, dec_b.params.m
    if m_b != m**a:
        raise InvalidInput(
            f"second factor must live on modulus m^a = {m**a}, got {m_b}"
        )
    if m**a > 1 << 31:
        raise ResourceLimit(f"intermediate modulus {m**a} exceeds the index range")
    d = a * b
    params = Params(d, m)
    n_block = m**a
    pos_maps = np.stack(
        [_block_index_map(dec_a, i) for i in range(a)]
    )

    def batch(coords: np.ndarray, color: int) -> np.ndarray:
        i, f = divmod(color, b)
        n = coords.shape[0]
        block_pos = np.empty((n, b), dtype=np.int64)
        for k in range(b):
            block = coords[:, a * k : a * k + a]
            block_pos[:, k] = pos_maps[i][encode_grid(block, m)]
        j = dec_b.directions(block_pos, f)
        rows = np.arange(n)
        moving = coords[rows[:, None], (a * j)[:, None] + np.arange(a)[None, :]]
        inner = dec_a.directions(moving, i)
        return a * j + inner

    recipe = {
        "kind": "composite",
        "a": a,
        "b": b,
        "m": m,
        "children": [dec_a.recipe, dec_b.recipe],
    }
    return Decomposition(params, batch, recipe, children=(dec_a, dec_b))


def _block_index_map(dec_a: Decomposition, factor: int) -> np.ndarray:
    from .lift import _factor_index_map

    return _factor_index_map(dec_a, factor)[1]


def successor_lift(b: int, m: int, base_dec: Decomposition, base_report) -> Decomposition:
    """Lift a solved D_b(m) to D_{2b+1}(m) by cylinders and modular trades."""
    d = 2 * b + 1
    if b < 5:
        raise UnsupportedParameters(f"successor lift needs base b >= 5, got {b}")
    if not (3 <= m < d) or m % 2 == 0:
        raise UnsupportedParameters(f"successor lift covers odd 3 <= m < {d}, got {m}")
    composition = (3,) + (2,) * (b - 1)
    partitions = ((1, 1, m - 2),) + ((1, m - 1),) * (b - 1)
    return _cylinder_lift(
        d, m, base_dec, base_report, composition, partitions, "successor-lift"
    )


def _dyadic_lift(d: int, b: int, m: int, base_dec: Decomposition, base_report) -> Decomposition:
    r = d - 2 * b
    if not 1 <= r <= b:
        raise UnsupportedParameters(f"dyadic base {b} out of range for d={d}")
    composition = (3,) * r + (2,) * (b - r)
    partitions = ((1, 1, m - 2),) * r + ((1, m - 1),) * (b - r)
    return _cylinder_lift(d, m, base_dec, base_report, composition, partitions, "dyadic-lift")


def _cylinder_lift(d, m, base_dec, base_report, composition, partitions, kind):
    bm = base_cylinder(base_dec, composition, partitions, base_report)
    if bm.params.d != d:
        raise InvalidInput(f"composition sums to {bm.params.d}, expected {d}")
    plan_ = choose_trade_vertices(bm)
    rho = universal_residue(d, bm.t_tail, m)
    assignment = realize_residues(bm, plan_, rho)
    return lift_decomposition(bm, assignment, kind=kind)


def from_recipe(recipe: dict, budget: int = DEFAULT_BUDGET) -> Decomposition:
    """Rebuild a decomposition from an exported recipe tree."""
    kind = recipe.get("kind")
    if kind == "d2-phase":
        from .smalldims import construct_d2

        return construct_d2(recipe["m"])
    if kind == "d3-table":
        from .smalldims import construct_d3

        return construct_d3(recipe["m"])
    if kind == "d5-schedule":
        from .smalldims import construct_d5

        return construct_d5(recipe["m"])
    if kind == "d7-boundary":
        from .d7boundary import boundary_decomposition

        return boundary_decomposition(recipe["m"])
    if kind == "count-schedule":
        from .countmatrix import CountMatrix, matrix_decomposition

        matrix = CountMatrix(recipe["d"], recipe["m"], recipe["matrix"])
        return matrix_decomposition(matrix, recipe.get("family", "imported"))
    if kind == "composite":
        dec_a = from_recipe(recipe["children"][0], budget)
        dec_b = from_recipe(recipe["children"][1], budget)
        return composite_lift(dec_a, dec_b)
    if kind in ("successor-lift", "dyadic-lift"):
        base = from_recipe(recipe["base"], budget)
        report = verify_decomposition(base, "auto", budget)
        if not report.passed:
            raise CertificateFailure("base of imported lift recipe fails verification")
        bm = base_cylinder(
            base,
            recipe["composition"],
            [tuple(p) for p in recipe["partitions"]],
            report,
        )
        plan_ = choose_trade_vertices(bm)
        rho = universal_residue(recipe["d"], bm.t_tail, recipe["m"])
        assignment = realize_residues(bm, plan_, rho)
        return lift_decomposition(bm, assignment, kind=kind)
    raise InvalidInput(f"unknown recipe kind {kind!r}")
