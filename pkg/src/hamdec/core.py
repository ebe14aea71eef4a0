"""Residue arithmetic, vertex encodings, and the layer/prefix coordinates.

A vertex of the directed torus D_d(m) is a point of (Z/mZ)^d.  Every unit
step e_i raises the coordinate sum ("layer") by one, so each vertex splits
into a layer t and a prefix vector z of length d-1 obtained from the
triangular change of variables

    z_j = x_{d-j} + ... + x_{d-1} - t   (1 <= j <= d-1).

In these coordinates a step e_i becomes the decrement of the pattern
p_r = (1,...,1,0,...,0) with r = d-1-i leading ones, together with a layer
increment.  The integer r is called the stop rank of the step.

Vertices are addressed by mixed-radix little-endian indices,
index = sum_j x_j * m^j; the same convention indexes prefix vectors.
Residues live in [0, m); subtraction is performed by adding m - v.  All
functions are pure and safe to call from concurrent workers; the ``*_of``
batch variants operate on numpy arrays, one row per point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidInput

__all__ = [
    "Params",
    "LayerPrefixPoint",
    "layer_sum",
    "to_layer_prefix",
    "from_layer_prefix",
    "apply_stop",
    "decode_grid",
    "encode_grid",
    "layer_sum_of",
    "prefix_of",
    "vertex_of",
    "prefix_decrement",
    "root_state_of",
]

CHUNK = 1 << 20


@dataclass(frozen=True)
class Params:
    """Dimension d >= 2 and modulus m >= 2 of a torus D_d(m)."""

    d: int
    m: int

    def __post_init__(self):
        if self.d < 2:
            raise InvalidInput(f"dimension must be at least 2, got {self.d}")
        if self.m < 2:
            raise InvalidInput(f"modulus must be at least 2, got {self.m}")

    @property
    def n_vertices(self) -> int:
        return self.m**self.d

    @property
    def n_root_states(self) -> int:
        return self.m ** (self.d - 1)

    def require_odd(self, who: str) -> None:
        """Constructions beyond d=2 need an odd modulus m >= 3."""
        if self.m < 3 or self.m % 2 == 0:
            from .errors import UnsupportedParameters

            raise UnsupportedParameters(
                f"{who} requires an odd modulus m >= 3, got m={self.m}"
            )


class LayerPrefixPoint(NamedTuple):
    """A vertex in layer/prefix coordinates: (layer t, prefix z)."""

    layer: int
    prefix: tuple[int, ...]


def _check_vertex(x: Sequence[int], p: Params) -> None:
    if len(x) != p.d:
        raise InvalidInput(f"vertex has {len(x)} coordinates, expected {p.d}")
    for v in x:
        if not 0 <= v < p.m:
            raise InvalidInput(f"coordinate {v} outside [0, {p.m})")


def layer_sum(x: Sequence[int], p: Params) -> int:
    """Mod-m coordinate sum of a vertex."""
    _check_vertex(x, p)
    return sum(x) % p.m


def to_layer_prefix(x: Sequence[int], p: Params) -> LayerPrefixPoint:
    """Triangular change of coordinates; inverse of :func:`from_layer_prefix`."""
    _check_vertex(x, p)
    m = p.m
    t = sum(x) % m
    suffix = 0
    z = []
    for j in range(1, p.d):
        suffix += x[p.d - j]
        z.append((suffix - t) % m)
    return LayerPrefixPoint(t, tuple(z))


def from_layer_prefix(q: LayerPrefixPoint, p: Params) -> tuple[int, ...]:
    """Reconstruct the vertex from (layer, prefix)."""
    t, z = q.layer, q.prefix
    if len(z) != p.d - 1:
        raise InvalidInput(f"prefix has {len(z)} coordinates, expected {p.d - 1}")
    m = p.m
    x = [0] * p.d
    x[p.d - 1] = (z[0] + t) % m
    for j in range(2, p.d):
        x[p.d - j] = (z[j - 1] - z[j - 2]) % m
    x[0] = (-z[p.d - 2]) % m
    return tuple(x)


def apply_stop(q: LayerPrefixPoint, r: int, p: Params) -> LayerPrefixPoint:
    """One torus step of stop rank r: layer + 1, prefix minus p_r."""
    if not 0 <= r < p.d:
        raise InvalidInput(f"stop rank {r} outside [0, {p.d})")
    m = p.m
    z = list(q.prefix)
    for j in range(r):
        z[j] = (z[j] - 1) % m
    return LayerPrefixPoint((q.layer + 1) % m, tuple(z))


# ---------------------------------------------------------------------------
# Batch variants.  coords arrays have shape (n, width) with values in [0, m).


def decode_grid(indices: np.ndarray, width: int, m: int) -> np.ndarray:
    """Mixed-radix little-endian digits of each index, shape (n, width)."""
    idx = np.asarray(indices, dtype=np.int64)
    out = np.empty((idx.shape[0], width), dtype=np.int64)
    for j in range(width):
        out[:, j] = idx % m
        idx = idx // m
    return out


def encode_grid(coords: np.ndarray, m: int) -> np.ndarray:
    """Inverse of :func:`decode_grid`."""
    coords = np.asarray(coords, dtype=np.int64)
    out = np.zeros(coords.shape[0], dtype=np.int64)
    for j in range(coords.shape[1] - 1, -1, -1):
        out = out * m + coords[:, j]
    return out


def layer_sum_of(coords: np.ndarray, m: int) -> np.ndarray:
    return coords.sum(axis=1) % m


def prefix_of(coords: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Layers and prefix vectors of a batch of vertices.

    Returns (t, z) with t of shape (n,) and z of shape (n, d-1).
    """
    suffix = np.cumsum(coords[:, ::-1], axis=1)
    t = suffix[:, -1] % m
    z = (suffix[:, :-1] - t[:, None]) % m
    return t, z


def vertex_of(t: np.ndarray, z: np.ndarray, m: int) -> np.ndarray:
    """Vertices from layers t (n,) and prefixes z (n, d-1)."""
    n, w = z.shape
    x = np.empty((n, w + 1), dtype=np.int64)
    x[:, w] = (z[:, 0] + t) % m
    if w > 1:
        x[:, 1:w] = (z[:, 1:][:, ::-1] - z[:, :-1][:, ::-1]) % m
    x[:, 0] = (m - z[:, w - 1]) % m
    return x


def prefix_decrement(z: np.ndarray, ranks: np.ndarray, m: int) -> np.ndarray:
    """Subtract p_r componentwise: decrement the first rank coordinates."""
    w = z.shape[1]
    dec = np.arange(1, w + 1)[None, :] <= ranks[:, None]
    return (z - dec) % m


def root_state_of(coords: np.ndarray, t: np.ndarray, m: int) -> np.ndarray:
    """Root-flat representative w = x - t*e_{d-1} of each vertex."""
    w = coords.copy()
    w[:, -1] = (w[:, -1] - t) % m
    return w
