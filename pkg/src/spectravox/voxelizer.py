"""Mesh-to-voxel-grid conversion and the sparse voxel grid type.

The conversion is a surface (shell) voxelization: a voxel is occupied
iff its closed axis-aligned cube intersects at least one mesh triangle,
decided by a boundary-inclusive separating-axis test. Triangles lying
exactly on a voxel face mark the voxels on both sides, which is
over-inclusive but deterministic and leaves no holes. An optional
interior fill pass (6-connected flood fill from the grid boundary)
turns shells into solids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .mesh_io import Mesh


@dataclass
class VoxelGrid:
    """Sparse cubic voxel grid.

    Attributes:
        resolution: grid is resolution**3 cells.
        voxels: map from integer (x, y, z), each in [0, resolution), to a
            strictly positive value (1.0 for plain occupancy). Zero-valued
            voxels are simply absent.
    """

    resolution: int
    voxels: dict[tuple[int, int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError(f"resolution must be >= 1, got {self.resolution}")
        r = self.resolution
        for coord, value in self.voxels.items():
            x, y, z = coord
            if not (0 <= x < r and 0 <= y < r and 0 <= z < r):
                raise ValueError(f"coordinate out of range: {coord} not in [0, {r})^3")
            if not value > 0:
                raise ValueError(f"voxel value must be > 0, got {value} at {coord}")

    @property
    def occupied_count(self) -> int:
        return len(self.voxels)

    @property
    def total_mass(self) -> float:
        return float(sum(self.voxels.values()))

    def sorted_items(self) -> tuple[np.ndarray, np.ndarray]:
        """Occupied coordinates and values in lexicographic (x, y, z) order."""
        if not self.voxels:
            return np.empty((0, 3), dtype=np.int64), np.empty(0, dtype=np.float64)
        keys = sorted(self.voxels)
        coords = np.asarray(keys, dtype=np.int64)
        values = np.asarray([self.voxels[k] for k in keys], dtype=np.float64)
        return coords, values


def normalize_mesh(mesh: Mesh) -> Mesh:
    """Translate and uniformly scale a mesh into the unit cube.

    The axis-aligned bounding box ends up centered at (0.5, 0.5, 0.5)
    with its longest side equal to 1; aspect ratio is preserved.

    Raises:
        ValueError: if all vertices coincide (zero bounding box).
    """
    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    extent = hi - lo
    longest = float(extent.max())
    if longest <= 0.0:
        raise ValueError("degenerate mesh extent: all vertices coincide")
    center = (lo + hi) / 2.0
    vertices = (mesh.vertices - center) / longest + 0.5
    return Mesh(vertices=vertices, faces=mesh.faces,
                degenerate_dropped=mesh.degenerate_dropped)


def _triangle_box_overlap_mask(v0, v1, v2, centers: np.ndarray) -> np.ndarray:
    """Boundary-inclusive SAT between one triangle and many unit cubes.

    Triangle vertices and cube centers are in voxel units, so every cube
    has half-extent 0.5. Returns a boolean mask over ``centers``. Zero
    axes (degenerate cross products) impose no constraint, which keeps
    the test exact for axis-aligned and zero-area triangles.
    """
    edges = (v1 - v0, v2 - v1, v0 - v2)
    axes = [np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0])]
    for basis in range(3):
        unit = axes[basis]
        for e in edges:
            axes.append(np.cross(unit, e))
    axes.append(np.cross(edges[0], edges[1]))

    mask = np.ones(len(centers), dtype=bool)
    tri = np.stack([v0, v1, v2])
    for axis in axes:
        if not mask.any():
            break
        s = tri @ axis
        r = 0.5 * np.abs(axis).sum()
        t = centers @ axis
        mask &= (s.min() - t <= r) & (s.max() - t >= -r)
    return mask


def voxelize_surface(mesh: Mesh, resolution: int) -> VoxelGrid:
    """Shell-voxelize a unit-cube-normalized mesh.

    A voxel (x, y, z) gets value 1.0 iff its closed cube
    [x/R, (x+1)/R] x [y/R, (y+1)/R] x [z/R, (z+1)/R] intersects at least
    one triangle. The result is independent of face order.

    Args:
        mesh: mesh with bounding box inside [0, 1]^3 (see normalize_mesh).
        resolution: grid resolution R >= 1.

    Raises:
        ValueError: empty face list, resolution < 1, or mesh outside the
            unit cube.
    """
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    if mesh.face_count == 0:
        raise ValueError("mesh has no faces, nothing to voxelize")
    slack = 1e-9
    if mesh.vertices.min() < -slack or mesh.vertices.max() > 1.0 + slack:
        raise ValueError("mesh extends outside the unit cube; run normalize_mesh first")

    r = resolution
    scaled = mesh.vertices * r  # voxel units: cells are unit cubes
    occupied: set[tuple[int, int, int]] = set()
    for face in mesh.faces:
        tri = scaled[face]
        lo = tri.min(axis=0)
        hi = tri.max(axis=0)
        # Cells whose closed cube meets the triangle's closed AABB.
        first = np.maximum(np.ceil(lo - 1.0).astype(np.int64), 0)
        last = np.minimum(np.floor(hi).astype(np.int64), r - 1)
        if np.any(first > last):
            continue
        xs = np.arange(first[0], last[0] + 1)
        ys = np.arange(first[1], last[1] + 1)
        zs = np.arange(first[2], last[2] + 1)
        gx, gy, gz = np.meshgrid(xs, ys, zs, indexing="ij")
        cells = np.column_stack([gx.ravel(), gy.ravel(), gz.ravel()])
        centers = cells + 0.5
        keep = _triangle_box_overlap_mask(tri[0], tri[1], tri[2], centers)
        for cell in cells[keep]:
            occupied.add((int(cell[0]), int(cell[1]), int(cell[2])))

    return VoxelGrid(resolution=r, voxels={c: 1.0 for c in occupied})


def fill_interior(grid: VoxelGrid) -> VoxelGrid:
    """Mark interior cavities as occupied at value 1.0.

    Interior means not reachable from the grid boundary through
    unoccupied cells under 6-connectivity. Occupied voxels keep their
    values.
    """
    r = grid.resolution
    occ = np.zeros((r, r, r), dtype=bool)
    for (x, y, z) in grid.voxels:
        occ[x, y, z] = True

    free = ~occ
    seed = np.zeros_like(free)
    seed[0, :, :] = seed[-1, :, :] = True
    seed[:, 0, :] = seed[:, -1, :] = True
    seed[:, :, 0] = seed[:, :, -1] = True
    seed &= free
    structure = ndimage.generate_binary_structure(3, 1)  # 6-connectivity
    outside = ndimage.binary_propagation(seed, structure=structure, mask=free)
    interior = free & ~outside

    voxels = dict(grid.voxels)
    for x, y, z in zip(*np.nonzero(interior)):
        voxels[(int(x), int(y), int(z))] = 1.0
    return VoxelGrid(resolution=r, voxels=voxels)


def parse_voxel_text(text: str) -> VoxelGrid:
    """Parse the plain-text voxel format.

    First non-blank line is the resolution R; every following non-blank
    line is ``x y z v`` with integer coordinates in [0, R) and v > 0.
    Duplicate coordinates sum their values.

    Raises:
        ValueError: non-numeric token, coordinate out of range, or
            v <= 0; the message names the offending line.
    """
    lines = text.splitlines()
    resolution = None
    voxels: dict[tuple[int, int, int], float] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if resolution is None:
            if len(parts) != 1:
                raise ValueError(f"line {lineno}: expected a single resolution value")
            try:
                resolution = int(parts[0])
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric resolution {parts[0]!r}") from None
            if resolution < 1:
                raise ValueError(f"line {lineno}: resolution must be >= 1, got {resolution}")
            continue
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 'x y z v', got {len(parts)} tokens")
        try:
            x, y, z = int(parts[0]), int(parts[1]), int(parts[2])
            v = float(parts[3])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric token in {line!r}") from None
        if not (0 <= x < resolution and 0 <= y < resolution and 0 <= z < resolution):
            raise ValueError(
                f"line {lineno}: coordinate out of range: ({x}, {y}, {z}) not in [0, {resolution})^3"
            )
        if not v > 0:
            raise ValueError(f"line {lineno}: voxel value must be > 0, got {v}")
        voxels[(x, y, z)] = voxels.get((x, y, z), 0.0) + v

    if resolution is None:
        raise ValueError("line 1: empty voxel text, expected resolution")
    return VoxelGrid(resolution=resolution, voxels=voxels)


def write_voxel_text(grid: VoxelGrid) -> str:
    """Serialize a VoxelGrid to the text format (lexicographic order)."""
    coords, values = grid.sorted_items()
    lines = [str(grid.resolution)]
    for (x, y, z), v in zip(coords, values):
        lines.append(f"{x} {y} {z} {v:.17g}")
    return "\n".join(lines) + "\n"


def load_voxel_text(path) -> VoxelGrid:
    """Read and parse a voxel text file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_voxel_text(fh.read())
