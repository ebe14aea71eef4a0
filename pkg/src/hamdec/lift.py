"""Base-to-tail lifting for moduli below the dimension.

A solved base torus D_b(m) is widened to dimension d = sum of the cylinder
composition: each base Hamilton factor absorbs parallel copies of the
active generator through a phase rule, every active arc receives a tail
label, and prescribed label-count residues are realized by local trades at
reserved base vertices.  The lifted oracle then routes inactive stops to
the base and active stops through the tail prefix maps at threshold zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Params, decode_grid, encode_grid, prefix_of
from .errors import (
    CertificateFailure,
    InternalError,
    InvalidInput,
    ResourceLimit,
    UnsupportedParameters,
)
from .prefix import LabelCounts, check_prefix_counts, label_rank_of
from .rootflat import Decomposition

__all__ = [
    "PhaseRule",
    "BaseMulti",
    "TradePlan",
    "ActiveAssignment",
    "cylinder_split",
    "base_cylinder",
    "choose_trade_vertices",
    "universal_residue",
    "realize_residues",
    "lift_decomposition",
]


@dataclass(frozen=True)
class PhaseRule:
    """Phase-block split of one horizontal cycle plus parallel verticals.

    Blocks are consecutive intervals of sizes alpha_i starting at phase 0;
    factor i steps horizontally when s = x + y mod m lies in its block and
    otherwise takes a vertical copy, the copies being assigned to the
    non-horizontal factors in ascending factor order.  Each factor's m-step
    return is (x, y) -> (x + alpha_i, y - alpha_i).
    """

    n: int
    m: int
    alphas: tuple[int, ...]
    blocks: tuple[tuple[int, int], ...]

    def is_horizontal(self, s: int, i: int) -> bool:
        lo, hi = self.blocks[i]
        return lo <= s % self.m < hi

    def step(self, x: int, y: int, i: int) -> tuple[int, int]:
        if self.is_horizontal((x + y) % self.m, i):
            return (x + 1) % self.n, y
        return x, (y + 1) % self.m


def cylinder_split(n: int, m: int, k: int, alphas) -> PhaseRule:
    """Validate a unit partition of m and lay out its phase blocks."""
    alphas = tuple(int(v) for v in alphas)
    if not 2 <= k <= m or len(alphas) != k:
        raise InvalidInput(f"need 2 <= k <= m parts, got k={k} of {len(alphas)}")
    if sum(alphas) != m:
        raise InvalidInput(f"parts sum to {sum(alphas)}, not {m}")
    for v in alphas:
        if v <= 0 or math.gcd(v, m) != 1:
            raise InvalidInput(f"part {v} is not a positive unit mod {m}")
    blocks = []
    lo = 0
    for v in alphas:
        blocks.append((lo, lo + v))
        lo += v
    return PhaseRule(n, m, alphas, tuple(blocks))


@dataclass
class BaseMulti:
    """A cylinder decomposition of the base multigraph on X = (Z/m)^(b+1).

    Colors split into b groups riding the b base Hamilton factors; at every
    base vertex exactly one color per group steps horizontally and the rest
    take the active generator, so exactly T = d - b colors are active.
    """

    params: Params
    b: int
    base_dec: Decomposition
    composition: tuple[int, ...]
    partitions: tuple[tuple[int, ...], ...]
    color_group: tuple[int, ...]
    color_block: tuple[tuple[int, int], ...]
    color_alpha: tuple[int, ...]
    index_maps: np.ndarray
    base_dirs: np.ndarray
    _active: np.ndarray | None = field(default=None, repr=False)

    @property
    def t_tail(self) -> int:
        return self.params.d - self.b

    @property
    def n_base(self) -> int:
        return self.params.m ** (self.b + 1)

    def base_uv(self, base_coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Split base points (t, z_1..z_b) into cycle coordinates (u, v).

        u spans the solved base torus, v is the active coordinate; the base
        generators act as u_j -> u_j + 1 and the active generator as
        v -> v + 1.
        """
        m = self.params.m
        b = self.b
        u = np.empty((base_coords.shape[0], b), dtype=np.int64)
        u[:, 0] = (base_coords[:, 0] + base_coords[:, 1]) % m
        for i in range(1, b):
            u[:, i] = (base_coords[:, i + 1] - base_coords[:, i]) % m
        v = (-base_coords[:, b]) % m
        return u, v

    def phases(self, u_idx: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Per-group phase s = position-along-factor + v, shape (n, b)."""
        m = self.params.m
        return (self.index_maps[:, u_idx].T + v[:, None]) % m

    def active_matrix(self) -> np.ndarray:
        """Boolean (n_base, d): is color c active at base vertex x."""
        if self._active is None:
            m, d = self.params.m, self.params.d
            base = decode_grid(np.arange(self.n_base, dtype=np.int64), self.b + 1, m)
            u, v = self.base_uv(base)
            phases = self.phases(encode_grid(u, m), v)
            act = np.empty((self.n_base, d), dtype=bool)
            for c in range(d):
                s = phases[:, self.color_group[c]]
                lo, hi = self.color_block[c]
                act[:, c] = ~((s >= lo) & (s < hi))
            self._active = act
        return self._active


def _factor_index_map(base_dec: Decomposition, factor: int) -> tuple[np.ndarray, np.ndarray]:
    """Directions and cycle positions of one base factor over all vertices."""
    params = base_dec.params
    b, m = params.d, params.m
    n = m**b
    coords = decode_grid(np.arange(n, dtype=np.int64), b, m)
    dirs = base_dec.directions(coords, factor)
    nxt = coords.copy()
    rows = np.arange(n)
    nxt[rows, dirs] = (nxt[rows, dirs] + 1) % m
    succ = encode_grid(nxt, m).tolist()
    index_map = np.full(n, -1, dtype=np.int64)
    v = 0
    for pos in range(n):
        if index_map[v] != -1:
            raise InvalidInput(f"base factor {factor} is not a Hamilton cycle")
        index_map[v] = pos
        v = succ[v]
    if v != 0:
        raise InvalidInput(f"base factor {factor} does not close after {n} steps")
    return dirs, index_map


def base_cylinder(
    base_dec: Decomposition,
    composition,
    partitions,
    base_report,
) -> BaseMulti:
    """Assemble the cylinder data over a verified base decomposition."""
    if base_report is None or not getattr(base_report, "passed", False):
        raise InvalidInput("base decomposition must come with a passing report")
    composition = tuple(int(k) for k in composition)
    partitions = tuple(tuple(int(a) for a in part) for part in partitions)
    b, m = base_dec.params.d, base_dec.params.m
    d = sum(composition)
    if len(composition) != b or len(partitions) != b:
        raise InvalidInput(f"need one group and one partition per base factor ({b})")
    if m ** (b + 1) * d > 400_000_000:
        raise ResourceLimit(f"cylinder data over {m ** (b + 1)} base vertices")
    color_group: list[int] = []
    color_block: list[tuple[int, int]] = []
    color_alpha: list[int] = []
    for j, (k_j, part) in enumerate(zip(composition, partitions)):
        rule = cylinder_split(m**b, m, k_j, part)
        for lo_hi, alpha in zip(rule.blocks, rule.alphas):
            color_group.append(j)
            color_block.append(lo_hi)
            color_alpha.append(alpha)
    pairs = [_factor_index_map(base_dec, j) for j in range(b)]
    return BaseMulti(
        params=Params(d, m),
        b=b,
        base_dec=base_dec,
        composition=composition,
        partitions=partitions,
        color_group=tuple(color_group),
        color_block=tuple(color_block),
        color_alpha=tuple(color_alpha),
        index_maps=np.stack([im for _, im in pairs]),
        base_dirs=np.stack([dirs for dirs, _ in pairs]),
    )


@dataclass
class TradePlan:
    """Reserved, pairwise distinct trade vertices with their pinned pairs."""

    auxiliaries: tuple[int, int, int]
    nonaux_sites: dict[tuple[int, int], list[tuple[int, int]]]
    aux_sites: dict[tuple[int, int], list[int]]

    def all_vertices(self) -> list[int]:
        out = [x for sites in self.nonaux_sites.values() for x, _ in sites]
        out.extend(x for sites in self.aux_sites.values() for x in sites)
        return out


def choose_trade_vertices(bm: BaseMulti) -> TradePlan:
    """Reserve distinct vertices for every (color, nonzero label) trade.

    Greedy scan in vertex-index order with per-class quotas; a starved class
    falls back to augmenting-path matching over the remaining vertices,
    which the counting bound behind the trade hypothesis guarantees to
    succeed.
    """
    d, m = bm.params.d, bm.params.m
    t_tail, b = bm.t_tail, bm.b
    if not (t_tail > b and m**b > m * d * t_tail):
        raise UnsupportedParameters(
            f"modular-trade hypothesis fails: T={t_tail}, b={b}, "
            f"m^b={m**b} vs m*d*T={m * d * t_tail}"
        )
    aux_group = next((j for j, k in enumerate(bm.composition) if k >= 3), None)
    if aux_group is None:
        raise UnsupportedParameters("no cylinder group of size >= 3")
    group_colors = [c for c in range(d) if bm.color_group[c] == aux_group]
    beta = tuple(group_colors[:3])

    active = bm.active_matrix()
    aux_any = active[:, list(beta)].any(axis=1)
    quota = m - 1

    classes: list[tuple] = []
    for c in range(d):
        if c in beta:
            continue
        for tau in range(1, t_tail):
            classes.append(("nonaux", c, tau))
    for i in (1, 2):
        for tau in range(1, t_tail):
            classes.append(("aux", i, tau))

    nonaux_sites: dict[tuple[int, int], list[tuple[int, int]]] = {
        (c, tau): [] for kind, c, tau in classes if kind == "nonaux"
    }
    aux_sites: dict[tuple[int, int], list[int]] = {
        (i, tau): [] for kind, i, tau in classes if kind == "aux"
    }

    def compatible(kind, key, x) -> bool:
        if kind == "nonaux":
            return bool(active[x, key] and aux_any[x])
        return bool(active[x, beta[0]] and active[x, beta[key]])

    def record(kind, key, tau, x) -> None:
        if kind == "nonaux":
            partner = next(bc for bc in beta if active[x, bc])
            nonaux_sites[(key, tau)].append((x, partner))
        else:
            aux_sites[(key, tau)].append(x)

    unfilled = list(classes)
    used = np.zeros(bm.n_base, dtype=bool)
    for x in range(bm.n_base):
        if not unfilled:
            break
        for pos, (kind, key, tau) in enumerate(unfilled):
            if compatible(kind, key, x):
                record(kind, key, tau, x)
                used[x] = True
                filled = (
                    len(nonaux_sites[(key, tau)])
                    if kind == "nonaux"
                    else len(aux_sites[(key, tau)])
                )
                if filled >= quota:
                    unfilled.pop(pos)
                break
    if unfilled:
        _matching_fallback(bm, beta, unfilled, used, quota, nonaux_sites, aux_sites, active, aux_any)
    return TradePlan(beta, nonaux_sites, aux_sites)


def _matching_fallback(
    bm, beta, unfilled, used, quota, nonaux_sites, aux_sites, active, aux_any
) -> None:
    """Complete starved classes by augmenting paths over unused vertices."""
    tokens = []
    for kind, key, tau in unfilled:
        have = len(nonaux_sites[(key, tau)]) if kind == "nonaux" else len(aux_sites[(key, tau)])
        tokens.extend([(kind, key, tau)] * (quota - have))
    free = np.flatnonzero(~used)
    vertex_pos = {int(x): i for i, x in enumerate(free)}
    match_vertex = [-1] * len(free)
    match_token: list[int | None] = [None] * len(tokens)

    def adjacency(kind, key):
        if kind == "nonaux":
            ok = active[free, key] & aux_any[free]
        else:
            ok = active[free, beta[0]] & active[free, beta[key]]
        return np.flatnonzero(ok)

    def augment(ti, seen):
        kind, key, tau = tokens[ti]
        for vi in adjacency(kind, key):
            vi = int(vi)
            if seen[vi]:
                continue
            seen[vi] = True
            if match_vertex[vi] == -1 or augment(match_vertex[vi], seen):
                match_vertex[vi] = ti
                match_token[ti] = vi
                return True
        return False

    for ti in range(len(tokens)):
        if not augment(ti, [False] * len(free)):
            raise InternalError("trade-vertex matching starved despite Hall bound")
    for ti, vi in enumerate(match_token):
        kind, key, tau = tokens[ti]
        x = int(free[vi])
        if kind == "nonaux":
            partner = next(bc for bc in beta if active[x, bc])
            nonaux_sites[(key, tau)].append((x, partner))
        else:
            aux_sites[(key, tau)].append(x)


def universal_residue(d: int, t_tail: int, m: int) -> np.ndarray:
    """The unit residue matrix: one (1, 1, -2) triple plus (1, -1) pairs.

    Row c carries u_c at label 0 and -u_c at Delta; numeric columns vanish.
    All row and column sums vanish mod m and every u_c is a unit.
    """
    if d % 2 == 0:
        raise InvalidInput(f"universal residue needs odd d, got {d}")
    if t_tail < 2:
        raise InvalidInput(f"tail dimension must be >= 2, got {t_tail}")
    units = [1, 1, m - 2]
    while len(units) < d:
        units.extend([1, m - 1])
    rho = np.zeros((d, t_tail), dtype=np.int64)
    rho[:, 0] = units
    rho[:, 1] = (-np.asarray(units)) % m
    return rho % m


@dataclass
class ActiveAssignment:
    """Per base vertex, the bijection from active colors to tail labels.

    ``labels[x, c]`` is the tail label code of color c at base vertex x,
    or -1 when c is inactive there.
    """

    labels: np.ndarray

    def counts(self, d: int, t_tail: int) -> np.ndarray:
        out = np.zeros((d, t_tail), dtype=np.int64)
        for c in range(d):
            col = self.labels[:, c]
            out[c] = np.bincount(col[col >= 0], minlength=t_tail)
        return out


def realize_residues(bm: BaseMulti, plan: TradePlan, rho: np.ndarray) -> ActiveAssignment:
    """Baseline local bijections plus the trades that realize rho mod m."""
    d, m = bm.params.d, bm.params.m
    t_tail = bm.t_tail
    rho = np.asarray(rho, dtype=np.int64) % m
    if rho.shape != (d, t_tail):
        raise InvalidInput(f"residue matrix must be {d}x{t_tail}")
    if np.any(rho.sum(axis=0) % m) or np.any(rho.sum(axis=1) % m):
        raise InvalidInput("residue matrix must have vanishing row and column sums")

    active = bm.active_matrix()
    labels = np.where(active, active.cumsum(axis=1) - 1, -1).astype(np.int16)

    def pin(x: int, first: tuple[int, int], second: tuple[int, int]) -> None:
        # Rebuild the local bijection with two pinned (color, label) pairs,
        # remaining active colors ascending onto remaining labels ascending.
        cols = np.flatnonzero(active[x]).tolist()
        pins = {first[0]: first[1], second[0]: second[1]}
        rest_cols = [c for c in cols if c not in pins]
        rest_labs = [s for s in range(t_tail) if s not in pins.values()]
        for c, s in zip(rest_cols, rest_labs):
            pins[c] = s
        for c, s in pins.items():
            labels[x, c] = s

    for (c, tau), sites in plan.nonaux_sites.items():
        for x, partner in sites:
            pin(x, (c, 0), (partner, tau))
    for (i, tau), sites in plan.aux_sites.items():
        for x in sites:
            pin(x, (plan.auxiliaries[i], 0), (plan.auxiliaries[0], tau))

    assignment = ActiveAssignment(labels)
    counts = assignment.counts(d, t_tail)

    def swap(x: int, c_from: int, c_to: int, tau: int) -> None:
        assert labels[x, c_from] == 0 and labels[x, c_to] == tau
        labels[x, c_from] = tau
        labels[x, c_to] = 0
        counts[c_from, 0] -= 1
        counts[c_from, tau] += 1
        counts[c_to, tau] -= 1
        counts[c_to, 0] += 1

    diff = (rho - counts) % m
    for (c, tau), sites in sorted(plan.nonaux_sites.items()):
        lam = int(diff[c, tau])
        for x, partner in sites[:lam]:
            swap(x, c, partner, tau)
        diff = (rho - counts) % m
    for (i, tau), sites in sorted(plan.aux_sites.items()):
        mu = int(diff[plan.auxiliaries[i], tau])
        for x in sites[:mu]:
            swap(x, plan.auxiliaries[i], plan.auxiliaries[0], tau)
        diff = (rho - counts) % m
    if np.any((counts - rho) % m):
        raise InternalError("residue realization left a nonzero discrepancy")
    return assignment


def lift_decomposition(
    bm: BaseMulti, assignment: ActiveAssignment, kind: str = "successor-lift"
) -> Decomposition:
    """Assemble the full-torus oracle from base motion and tail labels."""
    d, m = bm.params.d, bm.params.m
    b, t_tail = bm.b, bm.t_tail
    counts = assignment.counts(d, t_tail)
    for c in range(d):
        length = int(counts[c].sum())
        lc = LabelCounts(int(counts[c, 0]), int(counts[c, 1]), tuple(int(v) for v in counts[c, 2:]))
        ok, reason = check_prefix_counts(lc, m, length)
        if not ok:
            raise CertificateFailure(f"tail counts of color {c} fail: {reason}")

    labels = assignment.labels
    index_maps = bm.index_maps
    base_dec = bm.base_dec
    color_group = bm.color_group
    color_block = bm.color_block

    base_dirs = bm.base_dirs

    def batch_tz(t: np.ndarray, z: np.ndarray, color: int) -> np.ndarray:
        base_coords = np.concatenate([t[:, None], z[:, :b]], axis=1)
        u, v = bm.base_uv(base_coords)
        u_idx = encode_grid(u, m)
        group = color_group[color]
        s = (index_maps[group][u_idx] + v) % m
        lo, hi = color_block[color]
        horizontal = (s >= lo) & (s < hi)
        out = np.empty(t.shape[0], dtype=np.int64)
        if horizontal.any():
            out[horizontal] = d - 1 - base_dirs[group][u_idx[horizontal]]
        act = ~horizontal
        if act.any():
            x_idx = encode_grid(base_coords[act], m)
            labs = labels[x_idx, color]
            if np.any(labs < 0):
                raise InternalError("active arc without a tail label")
            tail = z[act, b:]
            ranks = np.empty(labs.shape[0], dtype=np.int64)
            for lab in range(t_tail):
                sel = labs == lab
                if sel.any():
                    ranks[sel] = label_rank_of(tail[sel], 0, lab)
            out[act] = d - 1 - b - ranks
        return out

    def batch(coords: np.ndarray, color: int) -> np.ndarray:
        t, z = prefix_of(coords, m)
        return batch_tz(t, z, color)

    recipe = {
        "kind": kind,
        "d": d,
        "m": m,
        "b": b,
        "composition": list(bm.composition),
        "partitions": [list(p) for p in bm.partitions],
        "base": base_dec.recipe,
    }
    return Decomposition(bm.params, batch, recipe, children=(base_dec,), batch_tz=batch_tz)
