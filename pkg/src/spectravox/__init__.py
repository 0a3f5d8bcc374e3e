"""spectravox: 3D objects to 2D grayscale images via spectral graph layout.

A 3D object (triangle mesh or voxel grid) becomes a graph over its
occupied voxels; the eigenvectors of the two smallest nontrivial
eigenvalues of the graph Laplacian place every voxel in the plane, and
equal-width binning of that layout yields a grayscale image of any
requested dimension.
"""

from .eigen import (
    ConvergenceError,
    DisconnectedGraphError,
    EigenPair,
    SolveSettings,
    dense_eigen_oracle,
    smallest_nontrivial_pairs,
)
from .graph import (
    Graph,
    bridge_components,
    build_adjacency_graph,
    build_knn_graph,
    connected_components,
    laplacian,
)
from .image_io import ImageWriteSettings, read_pgm, write_csv, write_pgm
from .layout import (
    EmbeddedImage,
    SpectralCoords,
    bin_index,
    collision_count,
    rasterize,
    spectral_layout,
)
from .mesh_io import Mesh, OffParseError, load_off, parse_off, write_off
from .pipeline import EmbedReport, PipelineConfig, embed_grid, embed_mesh
from .voxelizer import (
    VoxelGrid,
    fill_interior,
    load_voxel_text,
    normalize_mesh,
    parse_voxel_text,
    voxelize_surface,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DisconnectedGraphError",
    "EigenPair",
    "EmbedReport",
    "EmbeddedImage",
    "Graph",
    "ImageWriteSettings",
    "Mesh",
    "OffParseError",
    "PipelineConfig",
    "SolveSettings",
    "SpectralCoords",
    "VoxelGrid",
    "bin_index",
    "bridge_components",
    "build_adjacency_graph",
    "build_knn_graph",
    "collision_count",
    "connected_components",
    "dense_eigen_oracle",
    "embed_grid",
    "embed_mesh",
    "fill_interior",
    "laplacian",
    "load_off",
    "load_voxel_text",
    "normalize_mesh",
    "parse_off",
    "parse_voxel_text",
    "rasterize",
    "read_pgm",
    "smallest_nontrivial_pairs",
    "spectral_layout",
    "voxelize_surface",
    "write_csv",
    "write_off",
    "write_pgm",
]
