"""Bit-exact serialization of embedded images to PGM and CSV.

Binary PGM (P5) carries the display rendering: intensities are
max-normalized, optionally through a log1p curve that keeps heavy-tailed
collision counts visible, and quantized to max_gray levels. CSV carries
the lossless full-precision intensities for downstream consumers. Both
formats write the largest-y bin as the top row (top-left image origin),
and identical inputs always produce byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .layout import EmbeddedImage

_SCALINGS = ("linear", "log1p")
_FORMATS = ("pgm", "csv")


@dataclass(frozen=True)
class ImageWriteSettings:
    """Rendering controls for PGM output."""

    format: str = "pgm"
    scaling: str = "linear"
    max_gray: int = 255

    def __post_init__(self):
        if self.format not in _FORMATS:
            raise ValueError(f"format must be one of {_FORMATS}, got {self.format!r}")
        if self.scaling not in _SCALINGS:
            raise ValueError(f"scaling must be one of {_SCALINGS}, got {self.scaling!r}")
        if not 1 <= self.max_gray <= 65535:
            raise ValueError(f"max_gray must be in [1, 65535], got {self.max_gray}")


def _top_down(image: EmbeddedImage) -> np.ndarray:
    # Stored row 0 = smallest y bin; files put the largest y bin on top.
    return image.intensities[::-1]


def write_pgm(image: EmbeddedImage, settings: ImageWriteSettings | None = None) -> bytes:
    """Render an image to binary PGM (P5) bytes.

    Pixel value = round(g(v) / g(v_max) * max_gray) with g the identity
    (linear) or ln(1 + v) (log1p); an all-zero image stays all zero.
    Samples are 1 byte up to max_gray 255, big-endian 2 bytes above.
    """
    settings = settings or ImageWriteSettings()
    grid = _top_down(image)
    vmax = float(grid.max())
    if vmax <= 0.0:
        levels = np.zeros_like(grid)
    elif settings.scaling == "log1p":
        levels = np.log1p(grid) / np.log1p(vmax) * settings.max_gray
    else:
        levels = grid / vmax * settings.max_gray
    quantized = np.rint(levels).astype(np.uint16 if settings.max_gray > 255 else np.uint8)

    header = f"P5\n{image.dim} {image.dim}\n{settings.max_gray}\n".encode("ascii")
    if settings.max_gray > 255:
        payload = quantized.astype(">u2").tobytes()
    else:
        payload = quantized.tobytes()
    return header + payload


def write_csv(image: EmbeddedImage) -> str:
    """Serialize intensities as full-precision CSV, top row = largest y bin."""
    rows = []
    for row in _top_down(image):
        rows.append(",".join(f"{v:.17g}" for v in row))
    return "\n".join(rows) + "\n"


def read_pgm(data: bytes) -> tuple[int, int, int, np.ndarray]:
    """Parse binary PGM bytes into (width, height, maxval, samples).

    Counterpart of :func:`write_pgm` for round-trip checks; samples come
    back as a (height, width) integer array in file (top-down) order.
    """
    parts = data.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5":
        raise ValueError("not a binary PGM (P5) stream")
    width, height = (int(tok) for tok in parts[1].split())
    maxval = int(parts[2])
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    expected = width * height * dtype.itemsize
    raw = parts[3]
    if len(raw) != expected:
        raise ValueError(f"PGM payload is {len(raw)} bytes, expected {expected}")
    samples = np.frombuffer(raw, dtype=dtype).reshape(height, width).astype(np.int64)
    return width, height, maxval, samples


def read_csv(text: str) -> np.ndarray:
    """Parse :func:`write_csv` output back into a top-down float array."""
    rows = [line.split(",") for line in text.strip().splitlines()]
    return np.asarray([[float(tok) for tok in row] for row in rows], dtype=np.float64)


def csv_to_image(text: str) -> EmbeddedImage:
    """Rebuild an EmbeddedImage from its CSV serialization."""
    top_down = read_csv(text)
    if top_down.shape[0] != top_down.shape[1]:
        raise ValueError("CSV grid is not square")
    return EmbeddedImage(dim=top_down.shape[0], intensities=top_down[::-1])
