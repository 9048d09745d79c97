"""Padded trapezoidal space-time lattice and per-layer storage of v and v_xx.

Layer ``k`` holds nodes ``l = -h_k .. h_k`` with half-width
``h_k = m1 + n - k``.  All layers live in one flat buffer; layer ``k`` starts
at ``offsets[k]`` and node ``l`` sits at ``offsets[k] + h_k + l``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IncompleteHistory, OutOfStencil, ValidationError


@dataclass(frozen=True)
class TrapezoidGrid:
    dx: float
    m1: int
    n: int

    def __post_init__(self):
        if not self.dx > 0:
            raise ValidationError(f"dx must be positive, got {self.dx}")
        if int(self.m1) != self.m1 or self.m1 < 1:
            raise ValidationError(f"m1 must be a positive integer, got {self.m1}")
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n}")

    @property
    def dt(self) -> float:
        return self.dx

    @property
    def A(self) -> float:
        return self.m1 * self.dx

    @property
    def T(self) -> float:
        return self.n * self.dx

    def half_width(self, k: int) -> int:
        return self.m1 + self.n - k

    def layer_size(self, k: int) -> int:
        return 2 * self.half_width(k) + 1

    def layer_indices(self, k: int) -> np.ndarray:
        h = self.half_width(k)
        return np.arange(-h, h + 1)

    def layer_x(self, k: int) -> np.ndarray:
        return self.layer_indices(k) * self.dx

    def t(self, k: int) -> float:
        return k * self.dx

    @property
    def half_widths(self) -> np.ndarray:
        return self.m1 + self.n - np.arange(self.n + 1)

    @property
    def offsets(self) -> np.ndarray:
        sizes = 2 * self.half_widths + 1
        return np.concatenate(([0], np.cumsum(sizes)[:-1]))

    @property
    def node_count(self) -> int:
        return int(np.sum(2 * self.half_widths + 1))

    def roi(self, k: int) -> slice:
        """Slice of layer ``k`` covering the region of interest |l| <= m1."""
        h = self.half_width(k)
        return slice(h - self.m1, h + self.m1 + 1)


def build_grid(dx: float, m1: int, n: int) -> TrapezoidGrid:
    return TrapezoidGrid(dx=float(dx), m1=int(m1), n=int(n))


def second_space_difference(layer, l: int, dx: float) -> complex:
    """Central second difference at array position ``l`` of ``layer``."""
    if l - 1 < 0 or l + 1 >= len(layer):
        raise OutOfStencil(f"position {l} needs neighbours in a layer of length {len(layer)}")
    return (layer[l + 1] - 2.0 * layer[l] + layer[l - 1]) / (dx * dx)


def second_difference_layer(layer: np.ndarray, dx: float) -> np.ndarray:
    """Second differences over the interior of ``layer``; the two edge slots are NaN."""
    out = np.full(layer.shape, np.nan, dtype=complex)
    out[1:-1] = (layer[2:] - 2.0 * layer[1:-1] + layer[:-2]) / (dx * dx)
    return out


@dataclass
class StateHistory:
    """v and cached v_xx for every completed layer.

    Layer 0 is initialised to zero (v(x, 0) = 0, hence v_xx = 0 there too).
    Edge slots of v_xx in later layers have no stencil and hold NaN.
    """

    grid: TrapezoidGrid
    v_flat: np.ndarray = field(init=False, repr=False)
    vxx_flat: np.ndarray = field(init=False, repr=False)
    n_complete: int = field(init=False, default=1)

    def __post_init__(self):
        count = self.grid.node_count
        self.v_flat = np.full(count, np.nan, dtype=complex)
        self.vxx_flat = np.full(count, np.nan, dtype=complex)
        self._offsets = self.grid.offsets
        self.v_layer(0)[:] = 0.0
        self.vxx_layer(0)[:] = 0.0

    def _span(self, k: int) -> slice:
        if not 0 <= k <= self.grid.n:
            raise IndexError(f"layer {k} outside 0..{self.grid.n}")
        start = self._offsets[k]
        return slice(start, start + self.grid.layer_size(k))

    def v_layer(self, k: int) -> np.ndarray:
        return self.v_flat[self._span(k)]

    def vxx_layer(self, k: int) -> np.ndarray:
        return self.vxx_flat[self._span(k)]

    @property
    def v_layers(self):
        return [self.v_layer(k) for k in range(self.n_complete)]

    @property
    def vxx_layers(self):
        return [self.vxx_layer(k) for k in range(self.n_complete)]

    def append(self, values: np.ndarray) -> int:
        """Store the next layer and its second differences; returns its index."""
        k = self.n_complete
        if k > self.grid.n:
            raise IndexError("history already holds every layer of the grid")
        values = np.asarray(values, dtype=complex)
        if values.shape != (self.grid.layer_size(k),):
            raise ValueError(f"layer {k} needs {self.grid.layer_size(k)} values, got {values.shape}")
        self.v_layer(k)[:] = values
        self.vxx_layer(k)[:] = second_difference_layer(values, self.grid.dx)
        self.n_complete = k + 1
        return k

    def require(self, k: int):
        if k >= self.n_complete:
            raise IncompleteHistory(f"layer {k} requested but only {self.n_complete} layers are complete")

    def stored_values(self) -> int:
        return self.v_flat.size + self.vxx_flat.size
