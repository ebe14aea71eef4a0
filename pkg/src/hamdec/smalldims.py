"""Closed-form constructions for dimensions two, three, and five.

Dimension two is a two-layer phase rule; dimension three is a vertex-level
direction table whose color returns are conjugate to a planar odometer; and
dimension five runs one zero-set selector layer between constant translation
layers, certified by a 27-cell exact cover and, for odd m >= 5, by an
explicit first-return count on a two-parameter section.
"""

from __future__ import annotations

import numpy as np

from . import tables
from .core import Params, decode_grid
from .errors import InvalidInput, ResourceLimit, UnsupportedParameters
from .rootflat import (
    Decomposition,
    Schedule,
    TranslationRule,
    ZeroSetSelectorRule,
    expand,
)

__all__ = [
    "construct_d2",
    "construct_d3",
    "construct_d5",
    "d5_schedule",
    "d3_direction",
    "d3_return",
    "d3_simulate_return",
    "d3_psi",
    "d3_odometer",
    "d5_selector",
    "d5_selector_theta",
    "lambda1_row",
    "d5_g_step",
    "d5_g_batch",
    "d5_exact_cover_check",
    "d5_first_return",
    "d5_simulate_first_return",
]


# --- dimension two ----------------------------------------------------------


def construct_d2(m: int) -> Decomposition:
    """Phase-rule decomposition of D_2(m); valid for every m >= 2.

    The first factor steps horizontally except on the layer s = m-1, the
    second complements it; both returns translate the root line by one.
    """
    params = Params(2, m)
    layers = tuple(
        TranslationRule.cyclic(1 if t == m - 1 else 0, 2) for t in range(m)
    )
    sched = Schedule(params, layers)
    return expand(sched, recipe={"kind": "d2-phase", "d": 2, "m": m})


# --- dimension three --------------------------------------------------------

_D3_ROWS = {
    (0, True): (0, 2, 1),
    (0, False): (1, 2, 0),
    (1, True): (2, 0, 1),
    (1, False): (2, 1, 0),
}


def d3_direction(x, c: int, m: int) -> int:
    """Direction of color c at a vertex of D_3(m)."""
    s = sum(x) % m
    if s in (0, 1):
        return _D3_ROWS[(s, x[2] % m == 0)][c]
    return c


def _d3_batch(m: int):
    def batch(coords: np.ndarray, color: int) -> np.ndarray:
        s = coords.sum(axis=1) % m
        kzero = coords[:, 2] % m == 0
        out = np.full(coords.shape[0], color, dtype=np.int64)
        for s0 in (0, 1):
            for kz in (True, False):
                sel = (s == s0) & (kzero == kz)
                out[sel] = _D3_ROWS[(s0, kz)][color]
        return out

    return batch


def _d3_batch_tz(m: int):
    # The table needs only the layer and K = x_2 = z_1 + t.
    def batch_tz(t: np.ndarray, z: np.ndarray, color: int) -> np.ndarray:
        kzero = (z[:, 0] + t) % m == 0
        out = np.full(t.shape[0], color, dtype=np.int64)
        for s0 in (0, 1):
            for kz in (True, False):
                sel = (t == s0) & (kzero == kz)
                out[sel] = _D3_ROWS[(s0, kz)][color]
        return out

    return batch_tz


def construct_d3(m: int) -> Decomposition:
    """Direction-table decomposition of D_3(m) for odd m >= 3."""
    params = Params(3, m)
    params.require_odd("construct_d3")
    return Decomposition(
        params,
        _d3_batch(m),
        {"kind": "d3-table", "d": 3, "m": m},
        batch_tz=_d3_batch_tz(m),
    )


def d3_return(c: int, i: int, k: int, m: int) -> tuple[int, int]:
    """Closed-form m-step first return of color c on the layer S = 0.

    States are the (i, k) parameters of the layer chart (i, s-i-k, k).
    """
    if c == 0:
        return ((i - 2 + (1 if k % m == 0 else 0)) % m, (k + 1) % m)
    if c == 1:
        return ((i + (1 if k % m == m - 1 else 0)) % m, (k + 1) % m)
    if c == 2:
        return ((i + 2 - (2 if k % m == 0 else 0)) % m, (k - 2) % m)
    raise InvalidInput(f"color {c} outside [0, 3)")


def d3_simulate_return(c: int, i: int, k: int, m: int) -> tuple[int, int]:
    """m-step simulation of color c from the layer-0 chart point (i, k)."""
    x = [i % m, (-i - k) % m, k % m]
    for _ in range(m):
        j = d3_direction(x, c, m)
        x[j] = (x[j] + 1) % m
    return x[0], x[2]


def d3_odometer(a: int, b: int, m: int) -> tuple[int, int]:
    """The planar odometer (a, b) -> (a+1, b + [a = 0])."""
    return ((a + 1) % m, (b + (1 if a % m == 0 else 0)) % m)


def d3_psi(c: int, i: int, k: int, m: int) -> tuple[int, int]:
    """Affine conjugacies carrying each return map onto the odometer."""
    if c == 0:
        return (k % m, (i + 2 * k) % m)
    if c == 1:
        return ((k + 1) % m, i % m)
    if c == 2:
        lam = (-pow(2, -1, m)) % m
        return ((lam * k) % m, (lam * (i + k)) % m)
    raise InvalidInput(f"color {c} outside [0, 3)")


# --- dimension five ---------------------------------------------------------


def _mask_of_set(zs: tuple[int, ...]) -> int:
    return sum(1 << i for i in zs)


def lambda1_row(u: frozenset[int] | tuple[int, ...]) -> tuple[int, ...]:
    """Selector row for an arbitrary feasible zero set, by least-shift lookup."""
    uset = frozenset(i % 5 for i in u)
    if len(uset) == 4:
        raise InvalidInput("zero sets of size 4 are infeasible on the root flat")
    for k in range(5):
        shifted = tuple(sorted((i - k) % 5 for i in uset))
        rep = tables.D5_LAMBDA1_ROWS.get(shifted)
        if rep is not None:
            return tuple((rep[(a - k) % 5] + k) % 5 for a in range(5))
    raise InvalidInput(f"no selector row reachable from {sorted(uset)}")


def d5_selector(zero_set) -> int:
    """Selector direction p(Z); the stored table and the cyclic rule agree."""
    zs = tuple(sorted(i % 5 for i in zero_set))
    if len(set(zs)) != len(zs):
        raise InvalidInput("zero set has repeated elements")
    if len(zs) not in (0, 1, 2, 3, 5):
        raise InvalidInput(f"zero set of size {len(zs)} is infeasible")
    stored = tables.D5_SELECTOR[zs]
    derived = lambda1_row(tuple((i - 1) % 5 for i in zs))[0]
    if stored != derived:
        from .errors import InternalError

        raise InternalError(f"selector table and cyclic rule disagree at {zs}")
    return stored


def d5_selector_theta() -> tuple[int, ...]:
    """p(Z) as a 32-entry mask-indexed table; -1 on infeasible masks."""
    theta = [-1] * 32
    for zs, p in tables.D5_SELECTOR.items():
        theta[_mask_of_set(zs)] = p
    return tuple(theta)


def d5_schedule(m: int) -> Schedule:
    """The five-dimensional schedule: selector layer between translations."""
    params = Params(5, m)
    params.require_odd("d5_schedule")
    selector = ZeroSetSelectorRule(d5_selector_theta())
    if m == 3:
        layers = (
            TranslationRule.cyclic(4, 5),
            selector,
            TranslationRule.cyclic(3, 5),
        )
    else:
        layers = (
            TranslationRule.cyclic(0, 5),
            selector,
            TranslationRule.cyclic(3, 5),
            TranslationRule.cyclic(4, 5),
        ) + tuple(TranslationRule.cyclic(0, 5) for _ in range(m - 4))
    return Schedule(params, layers)


def construct_d5(m: int) -> Decomposition:
    """Zero-set schedule decomposition of D_5(m) for odd m >= 3."""
    sched = d5_schedule(m)
    variant = "three-layer" if m == 3 else "standard"
    return expand(
        sched, recipe={"kind": "d5-schedule", "d": 5, "m": m, "variant": variant}
    )


_D5_B = (-3, 0, 0, 1, 1)


def d5_g_step(w, m: int) -> tuple[int, ...]:
    """One step of the normalised color-0 return G on the root flat."""
    zs = tuple(i for i in range(5) if w[i] % m == 0)
    p = d5_selector(zs)
    out = [(w[i] + _D5_B[i]) % m for i in range(5)]
    out[p] = (out[p] + 1) % m
    return tuple(out)


def d5_g_batch(states: np.ndarray, m: int) -> np.ndarray:
    """Vectorised G on root states given by all five coordinates."""
    theta = np.asarray(d5_selector_theta(), dtype=np.int64)
    mask = np.zeros(states.shape[0], dtype=np.int64)
    for i in range(5):
        mask |= (states[:, i] % m == 0).astype(np.int64) << i
    p = theta[mask]
    out = (states + np.asarray(_D5_B)) % m
    out[np.arange(states.shape[0]), p] = (out[np.arange(states.shape[0]), p] + 1) % m
    return out


def d5_exact_cover_check(m: int, budget: int = 200_000_000) -> bool:
    """Matching condition: each root state has exactly one selector preimage."""
    params = Params(5, m)
    params.require_odd("d5_exact_cover_check")
    if 5 * m**4 > budget:
        raise ResourceLimit(f"exact cover needs {5 * m**4} steps")
    return _zero_set_cover_counts(d5_selector_theta(), 5, m).all()


def _zero_set_cover_counts(theta, d: int, m: int) -> np.ndarray:
    """Vector over root states: does exactly one i satisfy theta(Z(y-q_i)) = i."""
    theta = np.asarray(theta, dtype=np.int64)
    n = m ** (d - 1)
    free = decode_grid(np.arange(n, dtype=np.int64), d - 1, m)
    count = np.zeros(n, dtype=np.int64)
    last = (-free.sum(axis=1)) % m
    for i in range(d):
        w = free.copy()
        wl = last.copy()
        if i < d - 1:
            w[:, i] = (w[:, i] - 1) % m
            wl = (wl + 1) % m
        mask = np.zeros(n, dtype=np.int64)
        for j in range(d - 1):
            mask |= (w[:, j] == 0).astype(np.int64) << j
        mask |= (wl == 0).astype(np.int64) << (d - 1)
        count += theta[mask] == i
    return count == 1


def d5_first_return(a: int, b: int, m: int) -> tuple[int, int, int]:
    """Closed-form first return of G to the section of selector value two.

    Section points are w(a, b) = (0, a, b, 0, -a-b) with a+b != 0.  Returns
    (a', b', excursion length).  Only defined for odd m >= 5.
    """
    if m < 5 or m % 2 == 0:
        raise UnsupportedParameters(f"first-return table needs odd m >= 5, got {m}")
    a, b = a % m, b % m
    s = (a + b) % m
    if s == 0:
        raise InvalidInput(f"({a}, {b}) lies outside the section (a+b=0)")
    h = (m - 1) // 2
    if b != m - 1:
        bp = b + 1
        ap = a if s == h else (a + h) % m
        if 1 <= s <= h - 1:
            length = (h + 1) * m
        elif s == h:
            length = 2 * (h + 1) * m
        else:
            length = (3 * h + 2) * m
        return ap, bp, length
    if a == 0:
        return 1, 0, m**3 - (m - 1) * (m - 2)
    return a, 0, m - 1


def d5_simulate_first_return(a: int, b: int, m: int) -> tuple[int, int, int]:
    """Step G until the section is hit again; oracle for the closed form."""
    if (a + b) % m == 0:
        raise InvalidInput(f"({a}, {b}) lies outside the section (a+b=0)")
    w = (0, a % m, b % m, 0, (-a - b) % m)
    steps = 0
    while True:
        w = d5_g_step(w, m)
        steps += 1
        if w[0] == 0 and w[3] == 0 and w[4] != 0:
            return w[1], w[2], steps
        if steps > m**4:
            raise InvalidInput("no return within the state space size")
