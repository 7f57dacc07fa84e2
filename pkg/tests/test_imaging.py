"""Moments, Hu invariants, binarization, components, strict PGM format."""

import numpy as np
import pytest

from irbeacon.imaging import (
    BoundingBox,
    DegeneratePatchError,
    Frame,
    PgmFormatError,
    binarize,
    central_moment,
    centroid,
    connected_components,
    hu_distance,
    hu_features,
    read_pgm,
    write_pgm,
)

rng = np.random.default_rng(42)


# --- binarize ----------------------------------------------------------------


def test_binarize_all_black():
    img = np.zeros((10, 12), dtype=np.uint8)
    assert binarize(img, 5).sum() == 0


def test_binarize_single_bright_pixel():
    img = np.zeros((10, 12), dtype=np.uint8)
    img[3, 4] = 200
    out = binarize(img, 5)
    assert out.sum() == 1 and out[3, 4] == 1


def test_binarize_threshold_boundary():
    img = np.array([[4, 5]], dtype=np.uint8)
    out = binarize(img, 5)
    assert out.tolist() == [[0, 1]]


def test_binarize_idempotent_on_rescaled_output():
    img = rng.integers(0, 256, size=(40, 50), dtype=np.uint8)
    once = binarize(img, 5)
    again = binarize(once * 255, 5)
    assert np.array_equal(once, again)


def test_binarize_accepts_frame():
    frame = Frame(pixels=np.full((4, 4), 9, dtype=np.uint8))
    assert binarize(frame, 5).all()


# --- connected components ----------------------------------------------------


def scipy_reference_components(binary):
    """Oracle: literal 3x3 dilation followed by 8-connected labeling."""
    from scipy import ndimage

    structure = np.ones((3, 3), dtype=bool)
    dilated = ndimage.binary_dilation(binary != 0, structure=structure)
    labeled, count = ndimage.label(dilated, structure=structure)
    boxes = []
    for lab in range(1, count + 1):
        ys, xs = np.nonzero((labeled == lab) & (binary != 0))
        if ys.size == 0:
            continue
        boxes.append(
            BoundingBox(int(xs.min()), int(ys.min()), int(xs.max() - xs.min() + 1), int(ys.max() - ys.min() + 1))
        )
    boxes.sort(key=lambda b: (b.y, b.x))
    return boxes


def test_empty_image_has_no_components():
    assert connected_components(np.zeros((20, 20), dtype=np.uint8)) == []


def test_two_far_pixels_two_boxes():
    img = np.zeros((20, 20), dtype=np.uint8)
    img[5, 5] = 1
    img[5, 15] = 1
    assert len(connected_components(img)) == 2


def test_diagonally_adjacent_pixels_merge():
    img = np.zeros((20, 20), dtype=np.uint8)
    img[5, 5] = 1
    img[6, 6] = 1
    boxes = connected_components(img)
    assert len(boxes) == 1
    assert (boxes[0].w, boxes[0].h) == (2, 2)


def test_dilation_merges_within_three_pixels():
    img = np.zeros((20, 20), dtype=np.uint8)
    img[5, 5] = 1
    img[5, 8] = 1  # gap of 2, merged by one dilation pass
    img[5, 12] = 1  # gap of 3 from previous, separate component
    boxes = connected_components(img)
    assert len(boxes) == 2
    assert boxes[0] == BoundingBox(5, 5, 4, 1)


def test_l_shaped_blob_box():
    img = np.zeros((10, 10), dtype=np.uint8)
    for x, y in [(2, 2), (2, 3), (2, 4), (3, 4), (4, 4)]:
        img[y, x] = 1
    boxes = connected_components(img)
    assert boxes == [BoundingBox(2, 2, 3, 3)]


def test_boxes_in_scan_order():
    img = np.zeros((30, 30), dtype=np.uint8)
    img[20, 3] = 1
    img[2, 25] = 1
    img[2, 2] = 1
    boxes = connected_components(img)
    assert [(b.y, b.x) for b in boxes] == [(2, 2), (2, 25), (20, 3)]


@pytest.mark.parametrize("density", [0.001, 0.01, 0.05])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_components_match_scipy_oracle(density, seed):
    local = np.random.default_rng(seed)
    img = (local.random((80, 120)) < density).astype(np.uint8)
    assert connected_components(img) == scipy_reference_components(img)


def test_components_partition_every_pixel():
    local = np.random.default_rng(7)
    img = (local.random((60, 60)) < 0.02).astype(np.uint8)
    boxes = connected_components(img)
    covered = np.zeros_like(img)
    for b in boxes:
        covered[b.y : b.y + b.h, b.x : b.x + b.w] = 1
    ys, xs = np.nonzero(img)
    assert covered[ys, xs].all()


# --- moments -----------------------------------------------------------------


def test_central_moments_single_pixel():
    patch = np.zeros((5, 5))
    patch[2, 3] = 17.0
    assert central_moment(patch, 1, 1) == 0.0
    assert central_moment(patch, 2, 0) == 0.0
    assert central_moment(patch, 0, 2) == 0.0


def test_central_moment_2x2_uniform():
    patch = np.full((2, 2), 100.0)
    # four pixels at +-0.5 offsets: mu20 = mu02 = 100 * 4 * 0.25
    assert central_moment(patch, 2, 0) == pytest.approx(100.0)
    assert central_moment(patch, 0, 2) == pytest.approx(100.0)
    assert central_moment(patch, 1, 1) == pytest.approx(0.0)


def test_mirror_negates_mu11():
    patch = rng.random((7, 9)) * 100
    m11 = central_moment(patch, 1, 1)
    mirrored = patch[:, ::-1]
    assert central_moment(mirrored, 1, 1) == pytest.approx(-m11)
    assert central_moment(mirrored, 2, 0) == pytest.approx(central_moment(patch, 2, 0))
    assert central_moment(mirrored, 0, 2) == pytest.approx(central_moment(patch, 0, 2))


def test_degenerate_patch_raises():
    with pytest.raises(DegeneratePatchError):
        centroid(np.zeros((4, 4)))
    with pytest.raises(DegeneratePatchError):
        central_moment(np.zeros((4, 4)), 2, 0)


def test_centroid_position():
    patch = np.zeros((5, 5))
    patch[1, 4] = 3.0
    assert centroid(patch) == (4.0, 1.0)


# --- Hu invariants -----------------------------------------------------------


def test_hu_matches_opencv_oracle():
    cv2 = pytest.importorskip("cv2")
    for seed in range(5):
        local = np.random.default_rng(seed)
        patch = (local.random((16, 16)) * 255).astype(np.float32)
        ours = hu_features(patch).as_array()
        theirs = cv2.HuMoments(cv2.moments(patch)).ravel()
        assert np.allclose(ours, theirs, rtol=1e-6, atol=1e-12)


def test_translation_invariance_exact():
    patch = rng.random((9, 9)) * 200
    big = np.zeros((40, 40))
    big[3 : 3 + 9, 5 : 5 + 9] = patch
    big2 = np.zeros((40, 40))
    big2[20 : 20 + 9, 17 : 17 + 9] = patch
    f1 = hu_features(big).as_array()
    f2 = hu_features(big2).as_array()
    assert np.array_equal(f1, f2)
    assert hu_distance(big, big2) == 0.0


def test_rotation_invariance():
    patch = np.zeros((21, 21))
    patch[8:13, 4:17] = 180.0
    patch[10, 10] = 255.0
    for k in (1, 2, 3):
        rotated = np.rot90(patch, k)
        assert hu_distance(patch, rotated) < 1e-3


def test_scale_c1_tolerance():
    # nearest-neighbor x2 upsample of a diagonal bar: discretization breaks
    # exact scale invariance, c1 should stay within 5%
    patch = np.zeros((9, 9))
    for i in range(9):
        patch[i, i] = 200.0
        if i < 8:
            patch[i + 1, i] = 120.0
    doubled = np.kron(patch, np.ones((2, 2)))
    c1a = hu_features(patch).c1
    c1b = hu_features(doubled).c1
    assert abs(c1a - c1b) / c1a < 0.05


def test_uniform_disk_c2_near_zero():
    ys, xs = np.indices((41, 41))
    disk = (((xs - 20) ** 2 + (ys - 20) ** 2) <= 15**2).astype(float) * 100
    f = hu_features(disk)
    assert abs(f.c2) < 1e-6 * f.c1


def test_hu_distance_symmetric_zero_on_identity():
    a = rng.random((8, 8)) * 255
    b = rng.random((8, 8)) * 255
    assert hu_distance(a, a) == 0.0
    assert hu_distance(a, b) == pytest.approx(hu_distance(b, a))


# --- PGM ---------------------------------------------------------------------


def test_pgm_round_trip(tmp_path):
    img = rng.integers(0, 256, size=(12, 17), dtype=np.uint8)
    path = tmp_path / "frame.pgm"
    write_pgm(path, img)
    assert np.array_equal(read_pgm(path), img)


def test_pgm_header_format(tmp_path):
    img = np.zeros((2, 3), dtype=np.uint8)
    path = tmp_path / "t.pgm"
    write_pgm(path, img)
    assert path.read_bytes().startswith(b"P5\n3 2\n255\n")


@pytest.mark.parametrize(
    "data",
    [
        b"P6\n2 2\n255\n" + b"\x00" * 12,  # wrong magic
        b"P5\n2 2\n65535\n" + b"\x00" * 8,  # wrong maxval
        b"P5\n2 2\n255\n\x00\x00\x00",  # short raster
        b"P5\n2 2\n255\n" + b"\x00" * 5,  # long raster
        b"P5\n# c\n2 2\n255\n" + b"\x00" * 4,  # comments rejected
    ],
)
def test_pgm_strictness(tmp_path, data):
    path = tmp_path / "bad.pgm"
    path.write_bytes(data)
    with pytest.raises(PgmFormatError):
        read_pgm(path)


def test_frame_properties():
    frame = Frame(pixels=np.zeros((1200, 1600), dtype=np.uint8), index=3, timestamp=0.03)
    assert frame.width == 1600 and frame.height == 1200
    with pytest.raises(ValueError):
        Frame(pixels=np.zeros(10, dtype=np.uint8))


def test_bounding_box_validation():
    with pytest.raises(ValueError):
        BoundingBox(0, 0, 0, 3)
    assert BoundingBox(1, 2, 3, 4).area == 12
