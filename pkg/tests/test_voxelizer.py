import numpy as np
import pytest

from spectravox.mesh_io import Mesh, parse_off
from spectravox.voxelizer import (
    VoxelGrid,
    fill_interior,
    normalize_mesh,
    parse_voxel_text,
    voxelize_surface,
    write_voxel_text,
)

from conftest import CUBE_OFF


def sampling_oracle(mesh: Mesh, resolution: int, samples_per_face: int = 100_000) -> set:
    """Independent voxelization witness: dense random barycentric samples on
    every triangle, each mapped to its containing cell. Every sampled
    surface point must land in a voxel the implementation marked."""
    rng = np.random.default_rng(12345)
    hit = set()
    for face in mesh.faces:
        a, b, c = mesh.vertices[face]
        u = rng.random(samples_per_face)
        v = rng.random(samples_per_face)
        flip = u + v > 1
        u[flip] = 1 - u[flip]
        v[flip] = 1 - v[flip]
        pts = a + u[:, None] * (b - a) + v[:, None] * (c - a)
        cells = np.clip(np.floor(pts * resolution).astype(np.int64), 0, resolution - 1)
        hit.update(map(tuple, cells.tolist()))
    return hit


# ---------------------------------------------------------------- normalize


def test_normalize_maps_into_unit_cube_centered():
    mesh = Mesh(vertices=np.array([[0, 0, 0], [2, 0, 0], [0, 2, 0]], dtype=float),
                faces=np.array([[0, 1, 2]]))
    out = normalize_mesh(mesh)
    lo = out.vertices.min(axis=0)
    hi = out.vertices.max(axis=0)
    assert np.all(lo >= -1e-12) and np.all(hi <= 1 + 1e-12)
    assert (hi - lo).max() == pytest.approx(1.0)
    assert (lo + hi) / 2 == pytest.approx([0.5, 0.5, 0.5])


def test_normalize_identity_scale_recenters_only():
    verts = np.array([[0, 0, 0], [1, 0.25, 0.25], [0.5, 0.5, 0.5]])
    mesh = Mesh(vertices=verts, faces=np.array([[0, 1, 2]]))
    out = normalize_mesh(mesh)
    shift = out.vertices - verts
    assert np.allclose(shift, shift[0])  # pure translation
    assert np.allclose(out.vertices.max(axis=0) - out.vertices.min(axis=0),
                       verts.max(axis=0) - verts.min(axis=0))


def test_normalize_rejects_coincident_vertices():
    mesh = Mesh(vertices=np.ones((3, 3)), faces=np.array([[0, 1, 2]]))
    with pytest.raises(ValueError, match="degenerate mesh extent"):
        normalize_mesh(mesh)


def test_normalize_preserves_aspect_ratio():
    mesh = Mesh(vertices=np.array([[0, 0, 0], [4, 1, 0], [0, 1, 2]], dtype=float),
                faces=np.array([[0, 1, 2]]))
    out = normalize_mesh(mesh)
    extent = out.vertices.max(axis=0) - out.vertices.min(axis=0)
    assert extent == pytest.approx([1.0, 0.25, 0.5])


# ---------------------------------------------------------------- voxelize


def test_unit_cube_at_r2_fills_all_eight(cube_off_text):
    mesh = normalize_mesh(parse_off(cube_off_text))
    grid = voxelize_surface(mesh, 2)
    assert set(grid.voxels) == {(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)}
    assert all(v == 1.0 for v in grid.voxels.values())
    oracle = sampling_oracle(mesh, 2, samples_per_face=20_000)
    assert oracle <= set(grid.voxels)


def test_boundary_plane_marks_both_slabs():
    # Quad in the plane z = 0.25 spanning the cube; at R = 4 that plane is
    # exactly the boundary between slabs 0 and 1.
    text = "OFF\n4 2 0\n0 0 0.25\n1 0 0.25\n1 1 0.25\n0 1 0.25\n3 0 1 2\n3 0 2 3\n"
    grid = voxelize_surface(parse_off(text), 4)
    zs = {c[2] for c in grid.voxels}
    assert zs == {0, 1}
    for z in (0, 1):
        cover = {(c[0], c[1]) for c in grid.voxels if c[2] == z}
        assert cover == {(x, y) for x in range(4) for y in range(4)}


def test_zero_faces_rejected():
    mesh = Mesh(vertices=np.array([[0.5, 0.5, 0.5]]), faces=np.zeros((0, 3), dtype=np.int64))
    with pytest.raises(ValueError, match="no faces"):
        voxelize_surface(mesh, 4)


def test_unnormalized_mesh_rejected():
    mesh = Mesh(vertices=np.array([[0, 0, 0], [3, 0, 0], [0, 3, 0]], dtype=float),
                faces=np.array([[0, 1, 2]]))
    with pytest.raises(ValueError, match="unit cube"):
        voxelize_surface(mesh, 4)


def test_face_order_permutation_invariance(cube_off_text):
    mesh = normalize_mesh(parse_off(cube_off_text))
    rng = np.random.default_rng(3)
    perm = rng.permutation(mesh.face_count)
    shuffled = Mesh(vertices=mesh.vertices, faces=mesh.faces[perm])
    assert voxelize_surface(mesh, 5).voxels == voxelize_surface(shuffled, 5).voxels


def test_sampled_surface_points_always_covered(cube_off_text):
    tetra = "OFF\n4 4 0\n0 0 0\n1 0 0\n0.5 1 0\n0.5 0.5 1\n3 0 1 2\n3 0 1 3\n3 1 2 3\n3 2 0 3\n"
    for text, res in ((tetra, 3), (tetra, 7), (cube_off_text, 6)):
        mesh = normalize_mesh(parse_off(text))
        grid = voxelize_surface(mesh, res)
        oracle = sampling_oracle(mesh, res, samples_per_face=50_000)
        assert oracle <= set(grid.voxels)


def test_doubling_resolution_never_loses_voxels(cube_off_text):
    tetra = "OFF\n4 4 0\n0 0 0\n1 0 0\n0.5 1 0\n0.5 0.5 1\n3 0 1 2\n3 0 1 3\n3 1 2 3\n3 2 0 3\n"
    for text in (CUBE_OFF, tetra):
        mesh = normalize_mesh(parse_off(text))
        for r in (2, 3, 5):
            low = voxelize_surface(mesh, r).occupied_count
            high = voxelize_surface(mesh, 2 * r).occupied_count
            assert high >= low


# ---------------------------------------------------------------- voxel text


def test_parse_voxel_text_basic():
    grid = parse_voxel_text("2\n0 0 0 1\n1 0 0 1\n")
    assert grid.resolution == 2
    assert grid.voxels == {(0, 0, 0): 1.0, (1, 0, 0): 1.0}


def test_parse_voxel_text_duplicates_sum():
    grid = parse_voxel_text("2\n0 0 0 1\n0 0 0 2\n")
    assert grid.voxels == {(0, 0, 0): 3.0}


def test_parse_voxel_text_out_of_range():
    with pytest.raises(ValueError, match="coordinate out of range"):
        parse_voxel_text("2\n5 0 0 1\n")


def test_parse_voxel_text_rejects_nonpositive_value():
    with pytest.raises(ValueError, match="must be > 0"):
        parse_voxel_text("2\n0 0 0 0\n")


def test_parse_voxel_text_rejects_non_numeric():
    with pytest.raises(ValueError, match="line 2.*non-numeric"):
        parse_voxel_text("2\n0 zero 0 1\n")


def test_parse_voxel_text_rejects_fractional_coordinate():
    with pytest.raises(ValueError, match="non-numeric"):
        parse_voxel_text("2\n0.5 0 0 1\n")


def test_voxel_text_round_trip():
    grid = parse_voxel_text("4\n0 0 0 1.5\n3 3 3 0.125\n1 2 3 7\n")
    again = parse_voxel_text(write_voxel_text(grid))
    assert again.resolution == grid.resolution
    assert again.voxels == grid.voxels


def test_voxel_grid_invariants():
    with pytest.raises(ValueError, match="out of range"):
        VoxelGrid(resolution=2, voxels={(2, 0, 0): 1.0})
    with pytest.raises(ValueError, match="> 0"):
        VoxelGrid(resolution=2, voxels={(0, 0, 0): 0.0})
    with pytest.raises(ValueError, match="resolution"):
        VoxelGrid(resolution=0, voxels={})


# ---------------------------------------------------------------- fill


def test_fill_closes_cube_cavity(cube_off_text):
    mesh = normalize_mesh(parse_off(cube_off_text))
    shell = voxelize_surface(mesh, 4)
    assert shell.occupied_count == 4 ** 3 - 2 ** 3  # hollow center at R=4
    solid = fill_interior(shell)
    assert solid.occupied_count == 4 ** 3
    assert all(v == 1.0 for v in solid.voxels.values())


def test_fill_leaves_open_shapes_alone():
    # A flat plate has no enclosed cavity.
    plate = VoxelGrid(resolution=4, voxels={(x, y, 1): 1.0 for x in range(4) for y in range(4)})
    assert fill_interior(plate).voxels == plate.voxels


def test_fill_preserves_existing_values(cube_off_text):
    mesh = normalize_mesh(parse_off(cube_off_text))
    shell = voxelize_surface(mesh, 4)
    doubled = VoxelGrid(resolution=4, voxels={c: 2.0 for c in shell.voxels})
    solid = fill_interior(doubled)
    assert solid.voxels[(0, 0, 0)] == 2.0
    assert solid.voxels[(1, 1, 1)] == 1.0  # interior fill value
