"""End-to-end embedding: voxel grid or mesh in, 2D image plus report out.

The grid path runs adjacency graph -> component bridging -> Laplacian ->
two smallest nontrivial eigenpairs -> plane layout -> rasterization.
The mesh path prepends unit-cube normalization and surface voxelization.
Grids of one or two voxels degenerate gracefully: missing eigenvector
axes collapse to the center bin instead of erroring.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .eigen import SolveSettings, smallest_nontrivial_pairs_with_stats
from .graph import bridge_components, build_adjacency_graph, laplacian
from .image_io import ImageWriteSettings
from .layout import EmbeddedImage, collision_count, rasterize, spectral_layout
from .mesh_io import Mesh
from .voxelizer import VoxelGrid, fill_interior, normalize_mesh, voxelize_surface


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a single embedding run needs."""

    resolution: int = 32
    connectivity: int = 6
    dim: int = 144
    fill: bool = False
    solve: SolveSettings = field(default_factory=SolveSettings)
    write: ImageWriteSettings = field(default_factory=ImageWriteSettings)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.resolution < 1:
            raise ValueError("resolution must be >= 1")


@dataclass
class EmbedReport:
    """Observability record for one embedding."""

    node_count: int
    edge_count: int
    bridges_added: int
    lambda2: float
    lambda3: float
    solver_iterations: int
    collision_count: int
    stage_seconds: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Fixed key order so serialized reports diff cleanly."""
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "bridges_added": self.bridges_added,
            "lambda2": self.lambda2,
            "lambda3": self.lambda3,
            "solver_iterations": self.solver_iterations,
            "collision_count": self.collision_count,
            "stage_seconds": {k: self.stage_seconds[k] for k in sorted(self.stage_seconds)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def embed_grid(grid: VoxelGrid, config: PipelineConfig | None = None) -> tuple[EmbeddedImage, EmbedReport]:
    """Embed an occupied voxel grid into a dim x dim intensity image.

    Pixel mass equals total voxel mass exactly (up to float summation).
    Disconnected grids are bridged, and the report records how many
    edges that took.

    Raises:
        ValueError: empty grid.
        ConvergenceError: propagated from the eigensolver.
    """
    config = config or PipelineConfig()
    if grid.occupied_count == 0:
        raise ValueError("empty voxel grid")

    timings: dict[str, float] = {}
    total_start = time.perf_counter()

    t0 = time.perf_counter()
    graph = build_adjacency_graph(grid, config.connectivity)
    timings["graph"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    connected = bridge_components(graph)
    bridges = connected.edge_count - graph.edge_count
    timings["bridge"] = time.perf_counter() - t0

    n = connected.node_count
    values = connected.node_values()
    if n == 1:
        # Nothing to solve: both layout axes are degenerate.
        x_entries = np.zeros(1)
        y_entries = np.zeros(1)
        lam2 = lam3 = 0.0
        iterations = 0
        timings["laplacian"] = 0.0
        timings["solve"] = 0.0
    else:
        t0 = time.perf_counter()
        lap = laplacian(connected)
        timings["laplacian"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        want = min(2, n - 1)
        pairs, stats = smallest_nontrivial_pairs_with_stats(lap, want, config.solve)
        timings["solve"] = time.perf_counter() - t0
        iterations = stats.iterations
        x_entries = pairs[0].vector
        lam2 = pairs[0].value
        if len(pairs) > 1:
            y_entries = pairs[1].vector
            lam3 = pairs[1].value
        else:
            # Two-node graph: only one nontrivial direction exists; the
            # second axis degenerates to the center bin.
            y_entries = np.zeros(n)
            lam3 = lam2

    t0 = time.perf_counter()
    coords = spectral_layout(x_entries, y_entries)
    image = rasterize(coords, values, config.dim)
    collisions = collision_count(coords, config.dim)
    timings["layout"] = time.perf_counter() - t0
    timings["total"] = time.perf_counter() - total_start

    report = EmbedReport(
        node_count=n,
        edge_count=connected.edge_count,
        bridges_added=bridges,
        lambda2=lam2,
        lambda3=lam3,
        solver_iterations=iterations,
        collision_count=collisions,
        stage_seconds=timings,
    )
    return image, report


def embed_mesh(mesh: Mesh, config: PipelineConfig | None = None) -> tuple[EmbeddedImage, EmbedReport]:
    """Normalize, voxelize and embed a triangle mesh.

    Raises:
        ValueError: empty face list or degenerate extent.
    """
    config = config or PipelineConfig()
    t0 = time.perf_counter()
    grid = voxelize_surface(normalize_mesh(mesh), config.resolution)
    if config.fill:
        grid = fill_interior(grid)
    voxelize_seconds = time.perf_counter() - t0

    image, report = embed_grid(grid, config)
    report.stage_seconds["voxelize"] = voxelize_seconds
    report.stage_seconds["total"] += voxelize_seconds
    return image, report
