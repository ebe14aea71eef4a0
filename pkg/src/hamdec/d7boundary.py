"""Boundary zero-set compilers for D_7(3) and D_7(5), with rank certificates.

The two moduli below seven sit outside the count-matrix range: a seven-color
prefix schedule needs one zero-symbol per color but has only m of them.  The
compilers instead run one selector layer keyed by the shifted zero mask of
the root state, with constant translation layers elsewhere.  The selector
satisfies an exact-cover condition that delivers the local certificate
obligations, and the single-cycle returns are witnessed by rank coordinates
regenerated here by walking each color's return orbit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tables
from .core import Params, decode_grid, encode_grid
from .errors import (
    CertificateFailure,
    InvalidInput,
    MalformedCertificate,
    UnsupportedParameters,
)
from .rootflat import (
    Decomposition,
    Schedule,
    TranslationRule,
    ZeroSetSelectorRule,
    expand,
    verify_rf,
)

__all__ = [
    "ZeroSetCompiler",
    "RankCertificate",
    "boundary_compiler",
    "boundary_schedule",
    "boundary_decomposition",
    "mc7_check",
    "generate_rank",
    "verify_rank",
    "return_permutation",
]


@dataclass(frozen=True)
class ZeroSetCompiler:
    """Selector table over 128 zero masks plus constant layer offsets."""

    m: int
    theta: tuple[int, ...]
    alpha: tuple[int, ...]

    def __post_init__(self):
        if len(self.theta) != 128:
            raise MalformedCertificate(
                f"selector needs 128 mask entries, got {len(self.theta)}"
            )
        if len(self.alpha) != self.m:
            raise MalformedCertificate(
                f"offsets need {self.m} entries, got {len(self.alpha)}"
            )
        if any(not 0 <= v < 7 for v in self.theta):
            raise MalformedCertificate("selector values must lie in [0, 7)")


@dataclass(frozen=True)
class RankCertificate:
    """Per color, the position of every root state along its return orbit.

    States are indexed by the mixed-radix index of the six free coordinates;
    the all-zero state has rank zero.
    """

    m: int
    ranks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.ranks) != 7:
            raise MalformedCertificate("rank certificate needs 7 color arrays")
        n = self.m**6
        if any(len(r) != n for r in self.ranks):
            raise MalformedCertificate(f"each rank array needs {n} values")


def boundary_compiler(m: int) -> ZeroSetCompiler:
    if m == 3:
        return ZeroSetCompiler(3, tables.D7_THETA3, tables.D7_ALPHA3)
    if m == 5:
        return ZeroSetCompiler(5, tables.D7_THETA5, tables.D7_ALPHA5)
    raise UnsupportedParameters(f"boundary compilers exist for m in {{3, 5}}, got {m}")


def boundary_schedule(m: int, compiler: ZeroSetCompiler | None = None) -> Schedule:
    """Selector layer at t = 1, translations by alpha(t) elsewhere."""
    comp = compiler if compiler is not None else boundary_compiler(m)
    if comp.m != m:
        raise InvalidInput(f"compiler is for m={comp.m}, not m={m}")
    layers = tuple(
        ZeroSetSelectorRule(comp.theta)
        if t == 1
        else TranslationRule.cyclic(comp.alpha[t], 7)
        for t in range(m)
    )
    return Schedule(Params(7, m), layers)


def boundary_decomposition(m: int, compiler: ZeroSetCompiler | None = None) -> Decomposition:
    sched = boundary_schedule(m, compiler)
    return expand(sched, recipe={"kind": "d7-boundary", "d": 7, "m": m})


def _root_states(m: int) -> tuple[np.ndarray, np.ndarray]:
    """All root states as free coordinates plus the forced last coordinate."""
    n = m**6
    free = decode_grid(np.arange(n, dtype=np.int64), 6, m)
    last = (-free.sum(axis=1)) % m
    return free, last


def _masks(free: np.ndarray, last: np.ndarray) -> np.ndarray:
    mask = np.zeros(free.shape[0], dtype=np.int64)
    for j in range(6):
        mask |= (free[:, j] == 0).astype(np.int64) << j
    mask |= (last == 0).astype(np.int64) << 6
    return mask


def mc7_check(m: int, compiler: ZeroSetCompiler | None = None) -> bool:
    """Exact cover plus outgoing Latin condition of the selector layer.

    Also asserts that no evaluated state shows exactly six zero coordinates,
    which the zero-sum relation forbids.
    """
    comp = compiler if compiler is not None else boundary_compiler(m)
    theta = np.asarray(comp.theta, dtype=np.int64)
    free, last = _root_states(comp.m)
    n = free.shape[0]

    masks = _masks(free, last)
    if np.any(np.bitwise_count(masks.astype(np.uint64)) == 6):
        raise CertificateFailure("state with six zero coordinates encountered")

    # Outgoing Latin: c -> c + theta(Z(w) - c) is a permutation per state.
    acc = np.zeros(n, dtype=np.int64)
    for c in range(7):
        shifted = ((masks >> c) | (masks << (7 - c))) & 127
        acc |= np.int64(1) << ((c + theta[shifted]) % 7)
    if not np.all(acc == 127):
        return False

    # Incoming exact cover: exactly one i with theta(Z(y - q_i)) = i.
    count = np.zeros(n, dtype=np.int64)
    for i in range(7):
        w = free.copy()
        wl = last.copy()
        if i < 6:
            w[:, i] = (w[:, i] - 1) % m
            wl = (wl + 1) % m
        mask = np.zeros(n, dtype=np.int64)
        for j in range(6):
            mask |= (w[:, j] == 0).astype(np.int64) << j
        mask |= (wl == 0).astype(np.int64) << 6
        count += theta[mask] == i
    return bool(np.all(count == 1))


def return_permutation(schedule: Schedule, color: int) -> np.ndarray:
    """The color's m-layer return on root states in free-coordinate indexing."""
    from .rootflat import _layer_directions

    params = schedule.params
    m = params.m
    free, _ = _root_states(m)
    cur = free
    for t in range(m):
        last = (-cur.sum(axis=1)) % m
        w = np.concatenate([cur, last[:, None]], axis=1)
        dirs = _layer_directions(schedule.layers[t], t, color, params, w=w)
        nxt = cur.copy()
        for i in range(6):
            sel = dirs == i
            nxt[sel, i] = (nxt[sel, i] + 1) % m
        cur = nxt
    return encode_grid(cur, m)


def generate_rank(m: int, compiler: ZeroSetCompiler | None = None) -> RankCertificate:
    """Regenerate rank coordinates by walking each color's return orbit.

    Requires the schedule to pass RF1/RF2 and each return to be one cycle;
    the rank of a state is its distance from the all-zero state.
    """
    sched = boundary_schedule(m, compiler)
    rf = verify_rf(sched, "rf1")
    rf2 = verify_rf(sched, "rf2")
    if not (rf.rf1_ok and rf2.rf2_ok):
        raise CertificateFailure(f"boundary schedule fails RF1/RF2 at m={m}")
    n = m**6
    all_ranks = []
    for color in range(7):
        perm = return_permutation(sched, color).tolist()
        ranks = [0] * n
        v = 0
        for step in range(1, n):
            v = perm[v]
            if v == 0:
                raise CertificateFailure(
                    f"return of color {color} closes after {step} steps, not {n}"
                )
            ranks[v] = step
        if perm[v] != 0:
            raise CertificateFailure(f"return of color {color} is not a single cycle")
        all_ranks.append(tuple(ranks))
    return RankCertificate(m, tuple(all_ranks))


def verify_rank(cert: RankCertificate, schedule: Schedule) -> bool:
    """Permutation and increment checks of a rank certificate."""
    m = schedule.params.m
    if cert.m != m:
        raise InvalidInput(f"certificate is for m={cert.m}, schedule for m={m}")
    n = m**6
    for color in range(7):
        ranks = np.asarray(cert.ranks[color], dtype=np.int64)
        counts = np.bincount(ranks, minlength=n)
        if ranks.shape[0] != n or not np.all(counts == 1):
            return False
        perm = return_permutation(schedule, color)
        if not np.array_equal(ranks[perm], (ranks + 1) % n):
            return False
    return True
