import numpy as np
import pytest

from spectravox.voxelizer import VoxelGrid

# Unit cube: 8 vertices, 12 triangles, outward winding.
CUBE_OFF = """OFF
8 12 0
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
3 0 2 1
3 0 3 2
3 4 5 6
3 4 6 7
3 0 1 5
3 0 5 4
3 2 3 7
3 2 7 6
3 1 2 6
3 1 6 5
3 3 0 4
3 3 4 7
"""


@pytest.fixture
def cube_off_text():
    return CUBE_OFF


def line_grid(n: int, resolution: int | None = None) -> VoxelGrid:
    """1 x 1 x n voxel line along x."""
    r = resolution or max(n, 1)
    return VoxelGrid(resolution=r, voxels={(i, 0, 0): 1.0 for i in range(n)})


def grid_from_coords(coords, resolution: int, value: float = 1.0) -> VoxelGrid:
    return VoxelGrid(resolution=resolution, voxels={tuple(c): value for c in coords})


def full_grid(resolution: int) -> VoxelGrid:
    coords = [(x, y, z)
              for x in range(resolution)
              for y in range(resolution)
              for z in range(resolution)]
    return grid_from_coords(coords, resolution)


def path_laplacian(n: int) -> np.ndarray:
    """Dense Laplacian of the n-node path, built directly from the matrix
    definition (independent of the graph module)."""
    lap = np.zeros((n, n))
    for i in range(n - 1):
        lap[i, i] += 1.0
        lap[i + 1, i + 1] += 1.0
        lap[i, i + 1] -= 1.0
        lap[i + 1, i] -= 1.0
    return lap
