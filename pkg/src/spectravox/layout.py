"""2D layout of graph nodes and rasterization into an intensity grid.

Each node is placed at the pair of entries the two nontrivial
eigenvectors hold for it; the bounding range of those coordinates is
split into dim equal-width bins per axis, and the node values landing
in each bin are summed into the pixel intensity. Intensities are stored
row 0 = smallest-y bin, column 0 = smallest-x bin; image writers flip
vertically for the top-left-origin file convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpectralCoords:
    """Per-node 2D coordinates with their exact axis ranges."""

    x: np.ndarray
    y: np.ndarray
    x_range: tuple[float, float]
    y_range: tuple[float, float]

    @property
    def node_count(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True)
class EmbeddedImage:
    """Square grid of non-negative pixel intensities.

    Row index is the y bin (row 0 = smallest y), column index the x bin.
    """

    dim: int
    intensities: np.ndarray

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        grid = np.ascontiguousarray(np.asarray(self.intensities, dtype=np.float64))
        if grid.shape != (self.dim, self.dim):
            raise ValueError(f"intensities must be {self.dim}x{self.dim}, got {grid.shape}")
        if np.any(grid < 0):
            raise ValueError("intensities must be non-negative")
        grid.flags.writeable = False
        object.__setattr__(self, "intensities", grid)

    @property
    def total_mass(self) -> float:
        return float(self.intensities.sum())


def spectral_layout(x_entries: np.ndarray, y_entries: np.ndarray) -> SpectralCoords:
    """Pair up eigenvector entries as per-node plane coordinates.

    Raises:
        ValueError: length mismatch or empty input.
    """
    x = np.asarray(x_entries, dtype=np.float64).ravel()
    y = np.asarray(y_entries, dtype=np.float64).ravel()
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] == 0:
        raise ValueError("need at least one node")
    return SpectralCoords(
        x=x, y=y,
        x_range=(float(x.min()), float(x.max())),
        y_range=(float(y.min()), float(y.max())),
    )


def bin_index(v: float, lo: float, hi: float, dim: int) -> int:
    """Equal-width bin of v in [lo, hi] split into dim parts.

    Bins are half-open with the last one closed, so v == hi lands in
    dim - 1. A degenerate range (lo == hi) maps everything to the center
    bin (dim - 1) // 2.

    Raises:
        ValueError: dim < 1, lo > hi, or v outside [lo, hi].
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if lo > hi:
        raise ValueError(f"invalid range: lo={lo} > hi={hi}")
    if v < lo or v > hi:
        raise ValueError(f"value {v} outside [{lo}, {hi}]")
    if lo == hi:
        return (dim - 1) // 2
    idx = int(np.floor((v - lo) / (hi - lo) * dim))
    return min(idx, dim - 1)


def _bin_indices(values: np.ndarray, lo: float, hi: float, dim: int) -> np.ndarray:
    """Vectorized bin_index over an array (same conventions)."""
    if lo > hi:
        raise ValueError(f"invalid range: lo={lo} > hi={hi}")
    if values.size and (values.min() < lo or values.max() > hi):
        raise ValueError(f"values outside [{lo}, {hi}]")
    if lo == hi:
        return np.full(values.shape, (dim - 1) // 2, dtype=np.int64)
    idx = np.floor((values - lo) / (hi - lo) * dim).astype(np.int64)
    return np.minimum(idx, dim - 1)


def pixel_assignments(coords: SpectralCoords, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-node (column, row) bin indices for a dim x dim grid."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    cols = _bin_indices(coords.x, coords.x_range[0], coords.x_range[1], dim)
    rows = _bin_indices(coords.y, coords.y_range[0], coords.y_range[1], dim)
    return cols, rows


def rasterize(coords: SpectralCoords, values: np.ndarray, dim: int) -> EmbeddedImage:
    """Sum node values into the dim x dim pixel grid.

    Pixel intensity is the sum of the values of all nodes binned there;
    untouched pixels stay 0. Accumulation order is the node order, so
    the output is bitwise deterministic.

    Raises:
        ValueError: dim < 1 or coords/values length mismatch.
    """
    vals = np.asarray(values, dtype=np.float64).ravel()
    if vals.shape[0] != coords.node_count:
        raise ValueError(f"length mismatch: {coords.node_count} coords vs {vals.shape[0]} values")
    cols, rows = pixel_assignments(coords, dim)
    grid = np.zeros((dim, dim), dtype=np.float64)
    np.add.at(grid, (rows, cols), vals)
    return EmbeddedImage(dim=dim, intensities=grid)


def collision_count(coords: SpectralCoords, dim: int) -> int:
    """Number of nodes sharing their pixel with at least one other node.

    Zero means the layout is one-to-one at this dim.
    """
    cols, rows = pixel_assignments(coords, dim)
    keys = rows * np.int64(dim) + cols
    _, counts = np.unique(keys, return_counts=True)
    return int(counts[counts >= 2].sum())
