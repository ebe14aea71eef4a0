"""Root-flat certificates (schedules), their expansion, and the RF verifier.

A schedule assigns, for each layer t and color, a direction rule evaluated
on the root-flat representative w = x - t*e_{d-1}.  The three certificate
conditions are

    RF1  per (t, w) the color -> direction row is a permutation,
    RF2  per (t, color) the layer map w -> w + q_{direction} is a bijection,
    RF3  per color the composed m-layer return is a single m^(d-1)-cycle,

and any schedule passing all three expands to a Hamilton decomposition.
The verifier here checks them by enumeration through the direction oracle
alone, so it is equally usable on externally supplied certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import (
    CHUNK,
    Params,
    decode_grid,
    encode_grid,
    prefix_decrement,
    prefix_of,
    vertex_of,
)
from .errors import InvalidInput, MalformedCertificate, ResourceLimit
from .prefix import label_rank_of, label_set

__all__ = [
    "TranslationRule",
    "ZeroSetSelectorRule",
    "PrefixLabelRule",
    "TableRule",
    "Schedule",
    "Decomposition",
    "RFReport",
    "schedule_direction",
    "expand",
    "verify_rf",
    "zero_mask_of",
    "shift_mask_of",
]


@dataclass(frozen=True)
class TranslationRule:
    """Constant direction per color; dir_of_color must be a permutation."""

    dir_of_color: tuple[int, ...]

    @classmethod
    def cyclic(cls, offset: int, d: int) -> "TranslationRule":
        return cls(tuple((c + offset) % d for c in range(d)))


@dataclass(frozen=True)
class ZeroSetSelectorRule:
    """Direction c + theta[mask(Z(w) - c)] from a zero-mask selector table.

    ``theta`` has 2^d entries indexed by mask = sum of 2^i over zero
    coordinates i of w; -1 marks masks that cannot arise on the root flat.
    """

    theta: tuple[int, ...]
    equivariant: bool = True


@dataclass(frozen=True)
class PrefixLabelRule:
    """Per-color prefix labels at the layer's threshold; a label permutation."""

    assignment: tuple[int, ...]
    threshold: int


@dataclass(frozen=True, eq=False)
class TableRule:
    """Explicit (root state, color) -> direction map.

    Rows are indexed by the mixed-radix index of the first d-1 coordinates
    of w (the last is forced by the zero-sum relation); -1 entries are
    treated as missing.
    """

    table: np.ndarray


LayerRule = TranslationRule | ZeroSetSelectorRule | PrefixLabelRule | TableRule


@dataclass(frozen=True)
class Schedule:
    """A root-flat certificate: m per-layer direction rules."""

    params: Params
    layers: tuple[LayerRule, ...]

    def __post_init__(self):
        d, m = self.params.d, self.params.m
        if len(self.layers) != m:
            raise InvalidInput(f"schedule needs {m} layers, got {len(self.layers)}")
        for t, rule in enumerate(self.layers):
            if isinstance(rule, TranslationRule):
                if sorted(rule.dir_of_color) != list(range(d)):
                    raise MalformedCertificate(
                        f"layer {t}: translation row is not a permutation"
                    )
            elif isinstance(rule, PrefixLabelRule):
                if rule.threshold != t:
                    raise MalformedCertificate(
                        f"layer {t}: prefix threshold {rule.threshold} != layer index"
                    )
                if sorted(rule.assignment) != list(label_set(d)):
                    raise MalformedCertificate(
                        f"layer {t}: label assignment is not a permutation"
                    )
            elif isinstance(rule, ZeroSetSelectorRule):
                if len(rule.theta) != 1 << d:
                    raise MalformedCertificate(
                        f"layer {t}: selector table needs {1 << d} entries"
                    )
            elif isinstance(rule, TableRule):
                if rule.table.shape != (self.params.n_root_states, d):
                    raise MalformedCertificate(f"layer {t}: table shape mismatch")
            else:
                raise InvalidInput(f"unknown layer rule {type(rule).__name__}")


def zero_mask_of(w: np.ndarray) -> np.ndarray:
    """Bitmask of zero coordinates, bit i set iff w_i = 0."""
    n, d = w.shape
    mask = np.zeros(n, dtype=np.int64)
    for i in range(d):
        mask |= (w[:, i] == 0).astype(np.int64) << i
    return mask


def shift_mask_of(mask: np.ndarray, c: int, d: int) -> np.ndarray:
    """Mask of the shifted zero set Z - c (cyclic bit rotation by -c)."""
    c = c % d
    if c == 0:
        return mask
    full = (1 << d) - 1
    return ((mask >> c) | (mask << (d - c))) & full


def _layer_directions(
    rule: LayerRule,
    t: int,
    color: int,
    params: Params,
    z: np.ndarray | None = None,
    w: np.ndarray | None = None,
) -> np.ndarray:
    """Directions of one color on one layer.

    ``z`` carries prefix states (needed by prefix-label rules), ``w``
    precomputed root states; selector and table rules reconstruct w from z
    when only z is given.
    """
    d, m = params.d, params.m
    n = (z if z is not None else w).shape[0]
    if isinstance(rule, TranslationRule):
        return np.full(n, rule.dir_of_color[color], dtype=np.int64)
    if isinstance(rule, PrefixLabelRule):
        if z is None:
            raise InvalidInput("prefix-label rules need prefix states")
        ranks = label_rank_of(z, rule.threshold % m, rule.assignment[color])
        return d - 1 - ranks
    if w is None:
        w = vertex_of(np.zeros(z.shape[0], dtype=np.int64), z, m)
    if isinstance(rule, ZeroSetSelectorRule):
        mask = shift_mask_of(zero_mask_of(w), color, d)
        theta = np.asarray(rule.theta, dtype=np.int64)
        vals = theta[mask]
        if np.any(vals < 0):
            bad = int(mask[int(np.argmax(vals < 0))])
            raise MalformedCertificate(f"selector has no entry for mask {bad}")
        return (color + vals) % d
    if isinstance(rule, TableRule):
        idx = encode_grid(w[:, : d - 1], m)
        vals = rule.table[idx, color]
        if np.any(vals < 0):
            raise MalformedCertificate(f"layer table missing entries at layer {t}")
        return vals.astype(np.int64)
    raise InvalidInput(f"unknown layer rule {type(rule).__name__}")


def _compile_schedule(s: Schedule):
    """Precompiled layer dispatch: translation directions and prefix labels
    become per-layer lookup tables; selector and table layers stay listed.

    Keeps oracle evaluation independent of the layer count, which matters
    for large moduli where almost every layer is a translation.
    """
    d, m = s.params.d, s.params.m
    trans = np.full((m, d), -1, dtype=np.int64)
    labels = np.full((m, d), -1, dtype=np.int64)
    special: list[int] = []
    for t, rule in enumerate(s.layers):
        if isinstance(rule, TranslationRule):
            trans[t] = rule.dir_of_color
        elif isinstance(rule, PrefixLabelRule):
            labels[t] = rule.assignment
        else:
            special.append(t)
    return trans, labels, special


def _rank_with_thresholds(z: np.ndarray, c: np.ndarray, label: int) -> np.ndarray:
    """Stop ranks of one label under per-row thresholds."""
    w = z.shape[1]
    if label == 0:
        return np.zeros(z.shape[0], dtype=np.int64)
    eq = z == c[:, None]
    r = np.where(eq.any(axis=1), eq.argmax(axis=1) + 1, w)
    if label == 1:
        return r
    return np.where(r < label, label, label - 1)


def _schedule_eval(
    s: Schedule,
    compiled,
    t: np.ndarray,
    z: np.ndarray,
    color: int,
    w_all: np.ndarray | None,
) -> np.ndarray:
    d, m = s.params.d, s.params.m
    trans, labels, special = compiled
    out = np.full(z.shape[0], -1, dtype=np.int64)

    trans_col = trans[:, color]
    sel = trans_col[t] >= 0
    if sel.any():
        out[sel] = trans_col[t[sel]]

    label_col = labels[:, color]
    row_labels = label_col[t]
    for lab in np.unique(row_labels):
        if lab < 0:
            continue
        sel = row_labels == lab
        ranks = _rank_with_thresholds(z[sel], t[sel] % m, int(lab))
        out[sel] = d - 1 - ranks

    for t0 in special:
        sel = t == t0
        if not sel.any():
            continue
        w = None
        if w_all is not None:
            w = w_all[sel].copy()
            w[:, d - 1] = (w[:, d - 1] - t0) % m
        out[sel] = _layer_directions(s.layers[t0], t0, color, s.params, z[sel], w)
    return out


def _schedule_batch_tz(s: Schedule) -> Callable[[np.ndarray, np.ndarray, int], np.ndarray]:
    compiled = _compile_schedule(s)

    def batch_tz(t: np.ndarray, z: np.ndarray, color: int) -> np.ndarray:
        return _schedule_eval(s, compiled, t, z, color, None)

    return batch_tz


def _schedule_batch(s: Schedule) -> Callable[[np.ndarray, int], np.ndarray]:
    compiled = _compile_schedule(s)

    def batch(coords: np.ndarray, color: int) -> np.ndarray:
        t, z = prefix_of(coords, s.params.m)
        return _schedule_eval(s, compiled, t, z, color, coords)

    return batch


class Decomposition:
    """A direction oracle delta(vertex, color) plus a construction recipe.

    ``directions`` evaluates the oracle on an (n, d) coordinate array; the
    scalar ``direction`` wraps it.  ``recipe`` is a JSON-ready tree naming
    the construction path, and ``children`` holds any sub-decompositions the
    construction consumed (used by the structural verifier).
    """

    def __init__(
        self,
        params: Params,
        batch: Callable[[np.ndarray, int], np.ndarray],
        recipe: dict,
        children: Sequence["Decomposition"] = (),
        batch_tz: Callable[[np.ndarray, np.ndarray, int], np.ndarray] | None = None,
    ):
        self.params = params
        self._batch = batch
        self._batch_tz = batch_tz
        self.recipe = recipe
        self.children = tuple(children)

    def directions(self, coords: np.ndarray, color: int) -> np.ndarray:
        if not 0 <= color < self.params.d:
            raise InvalidInput(f"color {color} outside [0, {self.params.d})")
        return self._batch(np.asarray(coords, dtype=np.int64), color)

    def directions_tz(self, t: np.ndarray, z: np.ndarray, color: int) -> np.ndarray:
        """Directions at layer/prefix points; avoids coordinate round trips
        for oracles that work natively in these coordinates."""
        if not 0 <= color < self.params.d:
            raise InvalidInput(f"color {color} outside [0, {self.params.d})")
        if self._batch_tz is not None:
            return self._batch_tz(t, z, color)
        return self._batch(vertex_of(t, z, self.params.m), color)

    def directions_ctz(
        self, coords: np.ndarray, t: np.ndarray, z: np.ndarray, color: int
    ) -> np.ndarray:
        """Directions when both coordinate systems are already at hand."""
        if self._batch_tz is not None:
            return self._batch_tz(t, z, color)
        return self._batch(coords, color)

    def direction(self, x: Sequence[int], color: int) -> int:
        coords = np.asarray([list(x)], dtype=np.int64)
        return int(self.directions(coords, color)[0])

    def __repr__(self):
        kind = self.recipe.get("kind", "?")
        return f"Decomposition(d={self.params.d}, m={self.params.m}, kind={kind!r})"


def schedule_direction(s: Schedule, x: Sequence[int], color: int) -> int:
    """Evaluate one schedule rule at a single vertex."""
    coords = np.asarray([list(x)], dtype=np.int64)
    return int(_schedule_batch(s)(coords, color)[0])


def expand(s: Schedule, recipe: dict | None = None) -> Decomposition:
    """Wrap a schedule as a lazy decomposition; verification is separate."""
    if recipe is None:
        from .certio import schedule_recipe

        recipe = schedule_recipe(s)
    return Decomposition(
        s.params, _schedule_batch(s), recipe, batch_tz=_schedule_batch_tz(s)
    )


def prefix_layer_step(
    dec: Decomposition, t: int, z_idx: np.ndarray, color: int
) -> np.ndarray:
    """Image prefix indices after one layer-t step of a color.

    States are prefix indices at layer t; the result indexes layer t+1.
    Evaluated chunk-wise through the decomposition's direction oracle.
    """
    params = dec.params
    d, m = params.d, params.m
    out = np.empty_like(z_idx)
    for lo in range(0, z_idx.shape[0], CHUNK):
        part = z_idx[lo : lo + CHUNK]
        z = decode_grid(part, d - 1, m)
        t_arr = np.full(part.shape[0], t, dtype=np.int64)
        dirs = dec.directions_tz(t_arr, z, color)
        if np.any((dirs < 0) | (dirs >= d)):
            raise MalformedCertificate(f"oracle returned a non-direction at layer {t}")
        ranks = d - 1 - dirs
        out[lo : lo + CHUNK] = encode_grid(prefix_decrement(z, ranks, m), m)
    return out


def color_return_map(dec: Decomposition, color: int) -> np.ndarray:
    """The m-layer return map of a color on prefix indices at layer 0.

    Oracles native to layer/prefix coordinates carry prefix digits through
    the m layers; other oracles walk in vertex coordinates, stepping the
    chosen direction in place.
    """
    params = dec.params
    d, m, n = params.d, params.m, params.n_root_states
    out = np.empty(n, dtype=np.int64)
    for lo in range(0, n, CHUNK):
        idx = np.arange(lo, min(lo + CHUNK, n), dtype=np.int64)
        z = decode_grid(idx, d - 1, m)
        if dec._batch_tz is not None:
            for t in range(m):
                t_arr = np.full(z.shape[0], t, dtype=np.int64)
                dirs = dec._batch_tz(t_arr, z, color)
                if np.any((dirs < 0) | (dirs >= d)):
                    raise MalformedCertificate(
                        f"oracle returned a non-direction at layer {t}"
                    )
                z = prefix_decrement(z, d - 1 - dirs, m)
        else:
            coords = vertex_of(np.zeros(z.shape[0], dtype=np.int64), z, m)
            rows = np.arange(coords.shape[0])
            for t in range(m):
                dirs = dec.directions(coords, color)
                if np.any((dirs < 0) | (dirs >= d)):
                    raise MalformedCertificate(
                        f"oracle returned a non-direction at layer {t}"
                    )
                coords[rows, dirs] = (coords[rows, dirs] + 1) % m
            _, z = prefix_of(coords, m)
        out[lo : lo + CHUNK] = encode_grid(z, m)
    return out


def first_return_length(succ: np.ndarray, start: int = 0) -> int:
    """Steps to the first revisit of ``start``; 0 if none within |domain|."""
    lst = succ.tolist()
    n = len(lst)
    v = lst[start]
    steps = 1
    while v != start and steps <= n:
        v = lst[v]
        steps += 1
    return steps if v == start else 0


@dataclass
class RFReport:
    """Outcome of the RF1-RF3 structural checks on a schedule."""

    params: Params
    mode: str
    rf1_ok: bool | None = None
    rf2_ok: bool | None = None
    rf3: dict[int, tuple[bool, int]] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        checks: list[bool] = []
        if self.rf1_ok is not None:
            checks.append(self.rf1_ok)
        if self.rf2_ok is not None:
            checks.append(self.rf2_ok)
        if self.rf3 is not None:
            target = self.params.n_root_states
            checks.append(all(s and n == target for s, n in self.rf3.values()))
        return bool(checks) and all(checks)


def verify_rf(
    s: Schedule | Decomposition,
    mode: str = "all",
    budget: int = 200_000_000,
) -> RFReport:
    """Check RF1/RF2/RF3 by enumeration over the root flat.

    Accepts a schedule or any decomposition (the checks only read the
    direction oracle).  Raises ResourceLimit carrying the partial report if
    the requested checks do not fit the step budget.
    """
    if mode not in ("rf1", "rf2", "rf3", "all"):
        raise InvalidInput(f"unknown RF mode {mode!r}")
    dec = expand(s, recipe={"kind": "schedule"}) if isinstance(s, Schedule) else s
    params = dec.params
    d, m = params.d, params.m
    n = params.n_root_states
    report = RFReport(params=params, mode=mode)
    budget_left = budget
    want = {"rf1", "rf2", "rf3"} if mode == "all" else {mode}

    if "rf1" in want:
        cost = m * d * n
        if cost > budget_left:
            raise ResourceLimit(f"RF1 needs {cost} steps", partial=report)
        budget_left -= cost
        report.rf1_ok = _check_rf1(dec, report)

    if "rf2" in want:
        cost = m * d * n
        if cost > budget_left:
            raise ResourceLimit(f"RF2 needs {cost} steps", partial=report)
        budget_left -= cost
        report.rf2_ok = _check_rf2(dec, report)

    if "rf3" in want:
        cost = d * (m + 1) * n
        if cost > budget_left:
            raise ResourceLimit(f"RF3 needs {cost} steps", partial=report)
        report.rf3 = {}
        for color in range(d):
            ret = color_return_map(dec, color)
            length = first_return_length(ret, 0)
            report.rf3[color] = (length == n, length)
    return report


def _check_rf1(dec: Decomposition, report: RFReport) -> bool:
    """Per (t, w), the d colors must use the d directions exactly once."""
    params = dec.params
    d, m, n = params.d, params.m, params.n_root_states
    full = (1 << d) - 1
    ok = True
    for t in range(m):
        for lo in range(0, n, CHUNK):
            idx = np.arange(lo, min(lo + CHUNK, n), dtype=np.int64)
            z = decode_grid(idx, d - 1, m)
            t_arr = np.full(idx.shape[0], t, dtype=np.int64)
            acc = np.zeros(idx.shape[0], dtype=np.int64)
            for color in range(d):
                acc |= np.int64(1) << dec.directions_tz(t_arr, z, color)
            if not np.all(acc == full):
                ok = False
                bad = int(idx[int(np.argmax(acc != full))])
                report.notes.append(f"RF1 fails at layer {t}, root state {bad}")
    return ok


def _check_rf2(dec: Decomposition, report: RFReport) -> bool:
    """Per (t, color), the layer map must cover the root flat."""
    params = dec.params
    d, m, n = params.d, params.m, params.n_root_states
    ok = True
    for t in range(m):
        for color in range(d):
            seen = np.zeros(n, dtype=bool)
            for lo in range(0, n, CHUNK):
                idx = np.arange(lo, min(lo + CHUNK, n), dtype=np.int64)
                seen[prefix_layer_step(dec, t, idx, color)] = True
            if not seen.all():
                ok = False
                report.notes.append(f"RF2 fails at layer {t}, color {color}")
    return ok
