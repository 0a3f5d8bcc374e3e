"""OFF mesh parsing and serialization.

Reads the ASCII OFF files used by common 3D shape collections (ModelNet
and friends) into an immutable triangle mesh. Polygons with more than
three vertices are fan-triangulated at parse time; degenerate faces
(repeated vertex indices) are dropped and counted instead of raising,
because real dataset files contain them and they carry no surface area.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class OffParseError(ValueError):
    """Malformed OFF input. The message always names a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Mesh:
    """Indexed triangle soup.

    Attributes:
        vertices: (n, 3) float64 array of model-space coordinates.
        faces: (m, 3) int64 array of vertex indices, all in [0, n).
        degenerate_dropped: number of zero-area faces (repeated indices)
            discarded when the mesh was built.
    """

    vertices: np.ndarray
    faces: np.ndarray
    degenerate_dropped: int = 0

    def __post_init__(self):
        verts = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        faces = np.ascontiguousarray(np.asarray(self.faces, dtype=np.int64))
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ValueError("vertices must be an (n, 3) array")
        if verts.shape[0] < 1:
            raise ValueError("mesh must have at least one vertex")
        faces = faces.reshape(-1, 3) if faces.size else faces.reshape(0, 3)
        if faces.size and (faces.min() < 0 or faces.max() >= verts.shape[0]):
            raise ValueError("face index out of range")
        verts.flags.writeable = False
        faces.flags.writeable = False
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "faces", faces)

    @property
    def vertex_count(self) -> int:
        return self.vertices.shape[0]

    @property
    def face_count(self) -> int:
        return self.faces.shape[0]


@dataclass
class _TokenStream:
    """Whitespace tokens with the 1-based line each one came from."""

    tokens: list[tuple[str, int]] = field(default_factory=list)
    pos: int = 0

    def next(self, what: str) -> tuple[str, int]:
        if self.pos >= len(self.tokens):
            last_line = self.tokens[-1][1] if self.tokens else 1
            raise OffParseError(last_line, f"unexpected end of file, expected {what}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def exhausted(self) -> bool:
        return self.pos >= len(self.tokens)


def _tokenize(text: str) -> _TokenStream:
    stream = _TokenStream()
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        for tok in body.split():
            stream.tokens.append((tok, lineno))
    return stream


def _parse_int(stream: _TokenStream, what: str) -> tuple[int, int]:
    tok, line = stream.next(what)
    try:
        return int(tok), line
    except ValueError:
        raise OffParseError(line, f"non-numeric token {tok!r}, expected {what}") from None


def _parse_float(stream: _TokenStream, what: str) -> tuple[float, int]:
    tok, line = stream.next(what)
    try:
        return float(tok), line
    except ValueError:
        raise OffParseError(line, f"non-numeric token {tok!r}, expected {what}") from None


def parse_off(text: str) -> Mesh:
    """Parse an ASCII OFF document into a Mesh.

    Accepts both header variants seen in the wild: ``OFF`` on its own
    line followed by the counts, and the single-line ``OFF n m k`` form
    (including the glued ``OFFn m k`` quirk some dataset files carry).
    Comments (``#`` to end of line) and blank lines are skipped anywhere.
    Faces with more than 3 vertices are fan-triangulated; faces with
    repeated indices are dropped and counted.

    Args:
        text: full OFF document.

    Returns:
        Parsed Mesh with exactly the declared vertex count and the
        triangulated faces.

    Raises:
        OffParseError: malformed header, count mismatch, face index out
            of range, or non-numeric token; the message names the line.
    """
    stream = _tokenize(text)
    magic, magic_line = stream.next("OFF header")
    if magic != "OFF":
        # Some files glue the vertex count onto the magic: "OFF123 456 0".
        if magic.startswith("OFF") and magic[3:].isdigit():
            stream.tokens.insert(stream.pos, (magic[3:], magic_line))
        else:
            raise OffParseError(magic_line, f"malformed header: expected 'OFF', got {magic!r}")

    n_verts, header_line = _parse_int(stream, "vertex count")
    n_faces, _ = _parse_int(stream, "face count")
    _parse_int(stream, "edge count")
    if n_verts < 1:
        raise OffParseError(header_line, f"vertex count must be >= 1, got {n_verts}")
    if n_faces < 0:
        raise OffParseError(header_line, f"face count must be >= 0, got {n_faces}")

    vertices = np.empty((n_verts, 3), dtype=np.float64)
    for i in range(n_verts):
        for axis in range(3):
            vertices[i, axis], _ = _parse_float(stream, f"coordinate of vertex {i}")

    triangles: list[tuple[int, int, int]] = []
    dropped = 0
    for f in range(n_faces):
        arity, arity_line = _parse_int(stream, f"vertex count of face {f}")
        if arity < 3:
            raise OffParseError(arity_line, f"face {f} has {arity} vertices, need at least 3")
        idx = []
        for j in range(arity):
            v, v_line = _parse_int(stream, f"index {j} of face {f}")
            if not 0 <= v < n_verts:
                raise OffParseError(v_line, f"face index out of range: {v} not in [0, {n_verts})")
            idx.append(v)
        for j in range(1, arity - 1):
            tri = (idx[0], idx[j], idx[j + 1])
            if len(set(tri)) < 3:
                dropped += 1
            else:
                triangles.append(tri)

    if not stream.exhausted():
        tok, line = stream.next("end of file")
        raise OffParseError(line, f"count mismatch: unexpected trailing token {tok!r}")

    faces = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    return Mesh(vertices=vertices, faces=faces, degenerate_dropped=dropped)


def write_off(mesh: Mesh) -> str:
    """Serialize a Mesh to ASCII OFF with exact float round-tripping."""
    lines = ["OFF", f"{mesh.vertex_count} {mesh.face_count} 0"]
    for v in mesh.vertices:
        lines.append(f"{v[0]:.17g} {v[1]:.17g} {v[2]:.17g}")
    for f in mesh.faces:
        lines.append(f"3 {f[0]} {f[1]} {f[2]}")
    return "\n".join(lines) + "\n"


def load_off(path) -> Mesh:
    """Read and parse an OFF file from disk."""
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        return parse_off(fh.read())
