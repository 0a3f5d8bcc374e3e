import math

import numpy as np
import pytest

from spectravox.image_io import (
    ImageWriteSettings,
    csv_to_image,
    read_csv,
    read_pgm,
    write_csv,
    write_pgm,
)
from spectravox.layout import EmbeddedImage


def image(rows):
    arr = np.asarray(rows, dtype=np.float64)
    return EmbeddedImage(dim=arr.shape[0], intensities=arr)


# ------------------------------------------------------------ pgm


def test_pgm_header_and_max_normalization():
    data = write_pgm(image([[0.0, 1.0], [1.0, 0.0]]))
    assert data.startswith(b"P5\n2 2\n255\n")
    # Stored row 0 is the smallest y bin; the file's top row is the largest.
    assert data[-4:] == bytes([255, 0, 0, 255])


def test_pgm_orientation_flips_rows():
    data = write_pgm(image([[0.0, 0.0], [255.0, 255.0]]))
    assert data[-4:] == bytes([255, 255, 0, 0])


def test_pgm_all_zero_image():
    data = write_pgm(image([[0.0, 0.0], [0.0, 0.0]]))
    assert data[-4:] == bytes([0, 0, 0, 0])


def test_pgm_log1p_scaling():
    # Intensities 1 and 3: ln2/ln4 * 255 rounds to 128.
    data = write_pgm(image([[1.0, 3.0], [0.0, 0.0]]),
                     ImageWriteSettings(scaling="log1p"))
    assert round(math.log(2) / math.log(4) * 255) == 128
    assert data[-4:] == bytes([0, 0, 128, 255])


def test_pgm_sixteen_bit_payload():
    settings = ImageWriteSettings(max_gray=65535)
    data = write_pgm(image([[0.0, 1.0], [0.5, 0.25]]), settings)
    width, height, maxval, samples = read_pgm(data)
    assert (width, height, maxval) == (2, 2, 65535)
    assert samples[1, 1] == 65535  # top-down: stored row 0 is file row 1


def test_pgm_round_trip_shape_and_range():
    rng = np.random.default_rng(8)
    img = image(rng.uniform(0, 9, size=(5, 5)))
    width, height, maxval, samples = read_pgm(write_pgm(img))
    assert (width, height, maxval) == (5, 5, 255)
    assert samples.min() >= 0 and samples.max() <= 255
    assert samples.shape == (5, 5)


def test_pgm_byte_identical_rewrites():
    rng = np.random.default_rng(9)
    img = image(rng.uniform(0, 3, size=(4, 4)))
    settings = ImageWriteSettings(scaling="log1p")
    assert write_pgm(img, settings) == write_pgm(img, settings)


def test_settings_validation():
    with pytest.raises(ValueError):
        ImageWriteSettings(scaling="gamma")
    with pytest.raises(ValueError):
        ImageWriteSettings(max_gray=0)
    with pytest.raises(ValueError):
        ImageWriteSettings(max_gray=70000)
    with pytest.raises(ValueError):
        ImageWriteSettings(format="png")


# ------------------------------------------------------------ csv


def test_csv_orientation_example():
    assert write_csv(image([[0.0, 1.0], [2.0, 3.0]])) == "2,3\n0,1\n"


def test_csv_single_cell():
    assert write_csv(image([[5.0]])) == "5\n"


def test_csv_round_trip_full_precision():
    values = np.array([[0.1, 1e-17], [123456.789012345678, 3.0]])
    img = image(values)
    rebuilt = csv_to_image(write_csv(img))
    assert np.array_equal(rebuilt.intensities, img.intensities)
    assert rebuilt.dim == img.dim


def test_csv_read_is_top_down():
    grid = read_csv("2,3\n0,1\n")
    assert grid.tolist() == [[2.0, 3.0], [0.0, 1.0]]


def test_csv_byte_identical_rewrites():
    rng = np.random.default_rng(10)
    img = image(rng.uniform(0, 5, size=(6, 6)))
    assert write_csv(img) == write_csv(img)
