"""Proposal filtering and the Hu-moment shape gate."""

import numpy as np
import pytest

from irbeacon.detector import (
    HU_GATE,
    detect,
    propose,
    reference_symbol,
    shape_distance,
)
from irbeacon.imaging import Frame
from irbeacon.simulator import (
    BeaconSpec,
    CameraConfig,
    MotionConfig,
    NoiseConfig,
    SceneConfig,
    render_frame,
)
from irbeacon.symbols import render_disk, render_symbol


def quiet_scene(distance, noise_floor=0.0, phase=0.0):
    return SceneConfig(
        beacons=(BeaconSpec("000100110010", (0.455, 2.56, float(distance)), phase_offset_ms=phase),),
        camera=CameraConfig(exposure_noise_floor=noise_floor),
        motion=MotionConfig(profile="standstill"),
        noise=NoiseConfig(clutter_rate=0.0),
    )


def canvas_with(patch, at=(600, 800)):
    img = np.zeros((1200, 1600), dtype=np.uint8)
    y, x = at
    img[y : y + patch.shape[0], x : x + patch.shape[1]] = np.rint(patch).astype(np.uint8)
    return img


def test_blob_of_two_pixels_rejected_by_area():
    img = np.zeros((100, 100), dtype=np.uint8)
    img[10, 10] = 200
    img[10, 11] = 200
    assert propose(img) == []


def test_saturated_square_rejected_by_area():
    img = np.zeros((100, 100), dtype=np.uint8)
    img[10:40, 10:40] = 255  # area 900 > 400
    assert propose(img) == []


def test_area_bounds_inclusive():
    img = np.zeros((100, 100), dtype=np.uint8)
    img[10, 10:13] = 200  # area exactly 3
    assert len(propose(img)) == 1
    img2 = np.zeros((100, 100), dtype=np.uint8)
    img2[10:30, 10:30] = 255  # area exactly 400
    assert len(propose(img2)) == 1


def test_one_proposal_for_mid_range_beacon():
    frame, _ = render_frame(quiet_scene(50), 0, seed=1)
    assert len(propose(frame.pixels)) == 1


def test_all_black_frame_no_detections():
    frame = Frame(pixels=np.zeros((1200, 1600), dtype=np.uint8))
    assert detect(frame) == []


def test_beacon_detected_near_truth_centroid_at_25m():
    frame, truth = render_frame(quiet_scene(25), 0, seed=1)
    dets = detect(frame)
    assert len(dets) == 1
    tb = truth.beacons[0]
    assert abs(dets[0].centroid[0] - tb.centroid_x) < 1.0
    assert abs(dets[0].centroid[1] - tb.centroid_y) < 1.0


@pytest.mark.parametrize("distance", [15, 25, 40, 60, 80, 100, 120])
def test_beacon_passes_gate_across_range(distance):
    frame, _ = render_frame(quiet_scene(distance), 0, seed=1)
    dets = detect(frame)
    assert len(dets) == 1
    assert dets[0].hu_dist < HU_GATE


def test_disk_artifact_rejected_beacon_kept():
    frame, truth = render_frame(quiet_scene(40), 0, seed=1)
    disk = render_disk((15, 15), (7.0, 7.0), 7.0, bloom_sigma=0.0, peak=255.0)
    img = frame.pixels.copy()
    img[100:115, 100:115] = np.rint(disk).astype(np.uint8)
    dets = detect(img)
    assert len(dets) == 1
    tb = truth.beacons[0]
    assert abs(dets[0].centroid[0] - tb.centroid_x) < 2.0


def test_disk_shape_distance_exceeds_gate():
    disk = render_disk((15, 15), (7.0, 7.0), 7.0, bloom_sigma=0.0, peak=255.0)
    assert shape_distance(disk) > HU_GATE


def test_both_symbols_match_the_single_reference():
    for bit in (0, 1):
        patch = render_symbol(bit, 3.5, (21, 21), (10.0, 10.0), bloom_sigma=1.0, peak=255.0)
        assert shape_distance(patch) < HU_GATE


def test_detections_subset_of_proposals():
    frame, _ = render_frame(quiet_scene(60, noise_floor=1.2), 0, seed=5)
    proposals = propose(frame.pixels)
    dets = detect(frame)
    boxes = {(b.x, b.y, b.w, b.h) for b in proposals}
    assert all((d.box.x, d.box.y, d.box.w, d.box.h) in boxes for d in dets)


def test_raising_threshold_never_removes_detections():
    frame, _ = render_frame(quiet_scene(60, noise_floor=1.2), 0, seed=5)
    loose = {(d.box.x, d.box.y) for d in detect(frame, hu_threshold=0.4)}
    tight = {(d.box.x, d.box.y) for d in detect(frame, hu_threshold=0.2)}
    assert tight <= loose


@pytest.mark.parametrize("distance", [40, 60, 80, 100])
def test_detection_rate_default_noise(distance):
    # default SceneConfig noise floor, 100 frames: the true beacon must be
    # found in at least 99% of them
    scene = SceneConfig(
        beacons=(BeaconSpec("000100110010", (0.455, 2.56, float(distance)), phase_offset_ms=97.0),),
        motion=MotionConfig(profile="standstill"),
        noise=NoiseConfig(clutter_rate=0.0),
    )
    hits = 0
    n = 100
    for i in range(n):
        frame, truth = render_frame(scene, i, seed=13)
        tb = truth.beacons[0]
        near = [
            d
            for d in detect(frame)
            if abs(d.centroid[0] - tb.centroid_x) < 8 and abs(d.centroid[1] - tb.centroid_y) < 8
        ]
        hits += bool(near)
    assert hits >= 0.99 * n


def test_reference_symbol_shape():
    ref = reference_symbol()
    assert ref.shape == (21, 21)
    assert ref.max() == pytest.approx(255.0)
    # anti-aliased: some intermediate values exist
    interior = (ref > 10) & (ref < 245)
    assert interior.any()


def test_detect_orders_by_scan_position():
    frame, _ = render_frame(quiet_scene(60), 0, seed=1)
    two = frame.pixels.copy()
    patch = render_symbol(1, 3.0, (13, 13), (6.0, 6.0), bloom_sigma=1.0, peak=200.0)
    two[50 : 50 + 13, 700 : 700 + 13] = np.rint(patch).astype(np.uint8)
    dets = detect(two)
    assert len(dets) == 2
    assert dets[0].box.y < dets[1].box.y
