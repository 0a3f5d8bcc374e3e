"""Desk-scale validation: synthetic shapes, 1-NN classification, and the
oracle-vs-sparse eigensolver selftest.

The classification harness checks that embedded images preserve
class-discriminative structure without any dataset download or learned
model: analytic voxel shells (box, sphere, torus) under seeded random
rotations are embedded and scored with leave-one-out nearest-neighbor
accuracy over raw pixel intensities.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .eigen import SolveSettings, dense_eigen_oracle, smallest_nontrivial_pairs
from .graph import Graph, bridge_components, build_adjacency_graph, build_knn_graph, laplacian
from .layout import EmbeddedImage
from .pipeline import PipelineConfig, embed_grid
from .voxelizer import VoxelGrid

SHAPE_KINDS = ("box", "sphere", "torus", "line")

_HALF_DIAGONAL = float(np.sqrt(3.0) / 2.0)


@dataclass(frozen=True)
class LabeledImage:
    label: str
    image: EmbeddedImage
    source_id: str


@dataclass(frozen=True)
class LabeledImageSet:
    """Embedded images with class labels, all sharing one dim."""

    items: tuple[LabeledImage, ...]

    def __post_init__(self):
        dims = {item.image.dim for item in self.items}
        if len(dims) > 1:
            raise ValueError(f"images disagree on dim: {sorted(dims)}")

    def __len__(self) -> int:
        return len(self.items)

    @property
    def labels(self) -> list[str]:
        return [item.label for item in self.items]


def _cube_rotations() -> list[np.ndarray]:
    """The 24 proper rotations of the cube, deterministically ordered."""
    mats = []
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        for sx in (1.0, -1.0):
            for sy in (1.0, -1.0):
                for sz in (1.0, -1.0):
                    m = np.zeros((3, 3))
                    m[0, perm[0]] = sx
                    m[1, perm[1]] = sy
                    m[2, perm[2]] = sz
                    if np.linalg.det(m) > 0:
                        mats.append(m)
    mats.sort(key=lambda m: tuple(m.ravel()))
    return mats


_CUBE_ROTATIONS = _cube_rotations()


def _axis_angle_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    axis = axis / np.linalg.norm(axis)
    k = np.array([
        [0, -axis[2], axis[1]],
        [axis[2], 0, -axis[0]],
        [-axis[1], axis[0], 0],
    ])
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)


def _random_rotation(rng: np.random.Generator, max_tilt: float = 0.15) -> np.ndarray:
    """One of the 24 axis-aligned cube rotations plus a small random tilt;
    keeps shells stable at modest resolutions while varying pose."""
    base = _CUBE_ROTATIONS[int(rng.integers(len(_CUBE_ROTATIONS)))]
    axis = rng.standard_normal(3)
    angle = float(rng.uniform(0.0, max_tilt))
    return base @ _axis_angle_matrix(axis, angle)


def generate_shape(
    kind: str,
    resolution: int = 32,
    seed: int = 0,
    rotate: bool = False,
    **params,
) -> VoxelGrid:
    """Analytic voxel shell of a parametric surface.

    A voxel is occupied when the surface function at its (optionally
    rotated) center is within half a voxel diagonal of zero. Kinds and
    their parameters, all in voxel units:

    - ``box``: half_extents (hx, hy, hz), each in (0, resolution/2)
    - ``sphere``: radius in (0, resolution/2)
    - ``torus``: major and minor radii, 0 < minor < major,
      major + minor < resolution/2
    - ``line``: length voxels in a straight row (never rotated)

    Deterministic for fixed (kind, params, seed).

    Raises:
        ValueError: unknown kind or out-of-range parameters.
    """
    if kind not in SHAPE_KINDS:
        raise ValueError(f"kind must be one of {SHAPE_KINDS}, got {kind!r}")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    r = resolution
    half = r / 2.0

    if kind == "line":
        length = int(params.pop("length", max(1, r // 2)))
        if params:
            raise ValueError(f"unknown parameters for line: {sorted(params)}")
        if not 1 <= length <= r:
            raise ValueError(f"line length must be in [1, {r}], got {length}")
        start = (r - length) // 2
        mid = r // 2
        voxels = {(start + i, mid, mid): 1.0 for i in range(length)}
        return VoxelGrid(resolution=r, voxels=voxels)

    rng = np.random.default_rng(seed)
    rotation = _random_rotation(rng) if rotate else np.eye(3)

    axes = np.arange(r, dtype=np.float64) + 0.5 - half
    gx, gy, gz = np.meshgrid(axes, axes, axes, indexing="ij")
    centers = np.column_stack([gx.ravel(), gy.ravel(), gz.ravel()])
    local = centers @ rotation  # rotate the shape: evaluate in object frame

    if kind == "sphere":
        radius = float(params.pop("radius", 0.36 * r))
        if params:
            raise ValueError(f"unknown parameters for sphere: {sorted(params)}")
        if not 0 < radius < half:
            raise ValueError(f"sphere radius must be in (0, {half}), got {radius}")
        f = np.linalg.norm(local, axis=1) - radius
    elif kind == "box":
        hx, hy, hz = params.pop("half_extents", (0.42 * r, 0.30 * r, 0.18 * r))
        if params:
            raise ValueError(f"unknown parameters for box: {sorted(params)}")
        he = np.array([hx, hy, hz], dtype=np.float64)
        if np.any(he <= 0) or np.any(he >= half):
            raise ValueError(f"box half extents must be in (0, {half}), got {he.tolist()}")
        d = np.abs(local) - he
        outside = np.linalg.norm(np.maximum(d, 0.0), axis=1)
        inside = np.minimum(d.max(axis=1), 0.0)
        f = outside + inside
    else:  # torus
        major = float(params.pop("major", 0.32 * r))
        minor = float(params.pop("minor", 0.12 * r))
        if params:
            raise ValueError(f"unknown parameters for torus: {sorted(params)}")
        if not (0 < minor < major and major + minor < half):
            raise ValueError(
                f"torus needs 0 < minor < major and major + minor < {half}, "
                f"got major={major}, minor={minor}"
            )
        ring = np.hypot(local[:, 0], local[:, 1]) - major
        f = np.hypot(ring, local[:, 2]) - minor

    mask = np.abs(f) <= _HALF_DIAGONAL
    idx = np.nonzero(mask)[0]
    coords = (centers[idx] + half - 0.5).round().astype(np.int64)
    voxels = {(int(x), int(y), int(z)): 1.0 for x, y, z in coords}
    if not voxels:
        raise ValueError(f"{kind} shell is empty at resolution {r}")
    return VoxelGrid(resolution=r, voxels=voxels)


def one_nn_classify(train: LabeledImageSet, query: EmbeddedImage) -> str:
    """Label of the training image closest in raw-intensity Euclidean
    distance; ties break to the first occurrence.

    Raises:
        ValueError: empty training set or dim mismatch.
    """
    if len(train) == 0:
        raise ValueError("empty training set")
    if train.items[0].image.dim != query.dim:
        raise ValueError(
            f"dim mismatch: train {train.items[0].image.dim}, query {query.dim}"
        )
    q = query.intensities.ravel()
    best_idx = 0
    best_d2 = np.inf
    for i, item in enumerate(train.items):
        d2 = float(np.sum((item.image.intensities.ravel() - q) ** 2))
        if d2 < best_d2:
            best_d2 = d2
            best_idx = i
    return train.items[best_idx].label


def leave_one_out_predictions(image_set: LabeledImageSet) -> list[str]:
    """1-NN prediction for every item against all the others.

    Raises:
        ValueError: fewer than 2 items.
    """
    n = len(image_set)
    if n < 2:
        raise ValueError("need at least 2 items for leave-one-out")
    flat = np.stack([item.image.intensities.ravel() for item in image_set.items])
    sq = np.sum(flat * flat, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (flat @ flat.T)
    np.fill_diagonal(d2, np.inf)
    predictions = []
    for i in range(n):
        j = int(np.argmin(d2[i]))  # first minimum wins ties
        predictions.append(image_set.items[j].label)
    return predictions


def leave_one_out_accuracy(image_set: LabeledImageSet) -> float:
    """Fraction of items whose leave-one-out 1-NN label matches their own."""
    predictions = leave_one_out_predictions(image_set)
    hits = sum(p == item.label for p, item in zip(predictions, image_set.items))
    return hits / len(image_set)


def make_synthetic_set(
    kinds: tuple[str, ...] = ("box", "sphere", "torus"),
    per_kind: int = 30,
    resolution: int = 32,
    dim: int = 32,
    seed: int = 0,
    solve: SolveSettings | None = None,
) -> LabeledImageSet:
    """Embed seeded rotated instances of each shape kind."""
    config = PipelineConfig(resolution=resolution, dim=dim,
                            solve=solve or SolveSettings())
    items = []
    for kind_index, kind in enumerate(kinds):
        for i in range(per_kind):
            instance_seed = seed * 1_000_000 + kind_index * 10_000 + i
            grid = generate_shape(kind, resolution=resolution, seed=instance_seed,
                                  rotate=True)
            image, _ = embed_grid(grid, config)
            items.append(LabeledImage(label=kind, image=image,
                                      source_id=f"{kind}-{i:03d}"))
    return LabeledImageSet(items=tuple(items))


def classification_results_csv(image_set: LabeledImageSet) -> str:
    """Per-item results table: kind, source id, predicted label, correct."""
    predictions = leave_one_out_predictions(image_set)
    out = io.StringIO()
    out.write("kind,source_id,predicted,correct\n")
    for item, predicted in zip(image_set.items, predictions):
        out.write(f"{item.label},{item.source_id},{predicted},{int(predicted == item.label)}\n")
    return out.getvalue()


def random_connected_graph(seed: int) -> Graph:
    """Seeded random connected graph, alternating between voxel-adjacency
    and k-NN topologies; node counts land in [5, 200]."""
    rng = np.random.default_rng(seed)
    if seed % 2 == 0:
        while True:
            r = int(rng.integers(3, 7))
            density = float(rng.uniform(0.2, 0.7))
            occupancy = rng.random((r, r, r)) < density
            count = int(occupancy.sum())
            if 5 <= count <= 200:
                break
        voxels = {
            (int(x), int(y), int(z)): 1.0
            for x, y, z in zip(*np.nonzero(occupancy))
        }
        connectivity = int(rng.choice([6, 18, 26]))
        graph = build_adjacency_graph(VoxelGrid(resolution=r, voxels=voxels), connectivity)
    else:
        n = int(rng.integers(5, 201))
        d = int(rng.choice([2, 3]))
        points = rng.normal(size=(n, d))
        k = int(rng.integers(1, min(6, n - 1) + 1))
        graph = build_knn_graph(points, k)
    return bridge_components(graph)


@dataclass(frozen=True)
class SelftestResult:
    seed: int
    node_count: int
    lambda2_error: float
    lambda3_error: float
    min_alignment: float
    passed: bool


def eigensolver_selftest(
    n_graphs: int = 100,
    value_tol: float = 1e-6,
    settings: SolveSettings | None = None,
) -> list[SelftestResult]:
    """Compare the sparse solver against the dense reference on seeded
    random connected graphs; alignment is only scored for eigenvalues
    whose gap to their neighbors exceeds value_tol."""
    results = []
    for seed in range(n_graphs):
        graph = random_connected_graph(seed)
        lap = laplacian(graph)
        pairs = smallest_nontrivial_pairs(lap, 2, settings)
        values, vectors = dense_eigen_oracle(lap)
        err2 = abs(pairs[0].value - values[1])
        err3 = abs(pairs[1].value - values[2])
        alignments = []
        for which, pair in zip((1, 2), pairs):
            below = values[which] - values[which - 1]
            above = values[which + 1] - values[which] if which + 1 < len(values) else np.inf
            if min(below, above) > value_tol:
                alignments.append(abs(float(pair.vector @ vectors[:, which])))
        min_alignment = min(alignments) if alignments else 1.0
        passed = err2 <= value_tol and err3 <= value_tol and min_alignment >= 1.0 - value_tol
        results.append(SelftestResult(
            seed=seed,
            node_count=graph.node_count,
            lambda2_error=err2,
            lambda3_error=err3,
            min_alignment=min_alignment,
            passed=passed,
        ))
    return results
