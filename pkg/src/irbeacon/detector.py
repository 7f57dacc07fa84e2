"""Beacon candidate detection in a single frame.

A frame is binarized, grouped into components, filtered to the plausible
beacon area range, and finally shape-gated by comparing each candidate's
grayscale patch against a rendered reference symbol with the Hu-moment
distance.  Patches are peak-normalized before the comparison: the
intensity-weighted normalized moments scale with absolute brightness, and
without normalization one fixed gate threshold could not hold across the
40x brightness span between near and far beacons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .imaging import BoundingBox, Frame, connected_components, hu_distance_features, hu_features
from .symbols import render_symbol

DEFAULT_THRESHOLD = 5
AREA_MIN = 3
AREA_MAX = 400
HU_GATE = 0.2
CROP_MARGIN = 1

REFERENCE_SIZE = 21
# Reference rendered like a mid-range beacon: a few pixels of bar softened
# by the optical halo, which is what accepted patches actually look like.
REFERENCE_APPARENT_SIZE = 3.5
REFERENCE_BLOOM_SIGMA = 1.0

# Patches are rescaled to this common peak before comparing invariants.
# Intensity-weighted normalized moments scale with brightness, so the peak
# constant fixes where on the reciprocal-log curve the comparison happens:
# unit peak would sit near the log singularity where pixel-quantization
# wobble dominates, while a large peak compresses genuine shape contrast.
GATE_PEAK = 2.5


@dataclass(frozen=True)
class Detection:
    """One beacon candidate that passed the shape gate."""

    box: BoundingBox
    centroid: tuple[float, float]
    patch_sum: float
    hu_dist: float
    frame_index: int
    patch: np.ndarray = field(repr=False, compare=False, default=None)


def reference_symbol(size: int = REFERENCE_SIZE) -> np.ndarray:
    """The canonical diagonal-bar reference patch (anti-aliased, bloomed)."""
    center = ((size - 1) / 2.0, (size - 1) / 2.0)
    return render_symbol(
        1,
        REFERENCE_APPARENT_SIZE,
        (size, size),
        center,
        bloom_sigma=REFERENCE_BLOOM_SIGMA,
        peak=255.0,
    )


def _shape_features(patch: np.ndarray, threshold: int = DEFAULT_THRESHOLD):
    """Features of a patch preprocessed exactly like a detector crop:
    cropped to the above-threshold bounding box plus margin, then rescaled
    to the common gate peak.
    """
    patch = np.asarray(patch, dtype=np.float64)
    ys, xs = np.nonzero(patch >= threshold)
    if ys.size:
        y0 = max(0, ys.min() - CROP_MARGIN)
        y1 = min(patch.shape[0], ys.max() + 1 + CROP_MARGIN)
        x0 = max(0, xs.min() - CROP_MARGIN)
        x1 = min(patch.shape[1], xs.max() + 1 + CROP_MARGIN)
        patch = patch[y0:y1, x0:x1]
    return hu_features(patch * (GATE_PEAK / patch.max()))


@lru_cache(maxsize=1)
def _reference_features():
    return _shape_features(reference_symbol())


def shape_distance(patch, reference=None, threshold: int = DEFAULT_THRESHOLD) -> float:
    """Gate distance between a grayscale patch and the reference symbol."""
    if reference is None:
        ref_features = _reference_features()
    else:
        ref_features = _shape_features(reference, threshold)
    return hu_distance_features(_shape_features(patch, threshold), ref_features)


def propose(frame, threshold: int = DEFAULT_THRESHOLD, area_min: int = AREA_MIN, area_max: int = AREA_MAX):
    """Component boxes whose area falls inside the beacon-plausible range."""
    pixels = frame.pixels if isinstance(frame, Frame) else np.asarray(frame)
    boxes = connected_components(pixels >= threshold)
    return [b for b in boxes if area_min <= b.area <= area_max]


def _crop(pixels: np.ndarray, box: BoundingBox, margin: int = CROP_MARGIN) -> tuple[np.ndarray, int, int]:
    h, w = pixels.shape
    x0 = max(0, box.x - margin)
    y0 = max(0, box.y - margin)
    x1 = min(w, box.x + box.w + margin)
    y1 = min(h, box.y + box.h + margin)
    return pixels[y0:y1, x0:x1], x0, y0


def detect(
    frame,
    reference=None,
    hu_threshold: float = HU_GATE,
    threshold: int = DEFAULT_THRESHOLD,
    area_min: int = AREA_MIN,
    area_max: int = AREA_MAX,
) -> list[Detection]:
    """Detections for one frame, in scan order.

    The grayscale crop spans the proposal box plus a one-pixel margin so
    the sub-threshold halo, which carries the orientation, stays in the
    patch.  An all-zero crop cannot happen for a real proposal (the box
    contains at least one above-threshold pixel); such proposals are
    dropped silently as they would indicate a cropping bug upstream.
    """
    if isinstance(frame, Frame):
        pixels, frame_index = frame.pixels, frame.index
    else:
        pixels, frame_index = np.asarray(frame), 0
    if reference is None:
        ref_features = _reference_features()
    else:
        ref_features = _shape_features(reference, threshold)

    detections = []
    for box in propose(pixels, threshold, area_min, area_max):
        patch, x0, y0 = _crop(pixels, box)
        total = float(patch.sum())
        if total <= 0.0:
            continue
        shape = patch.astype(np.float64)
        shape *= GATE_PEAK / shape.max()
        dist = hu_distance_features(hu_features(shape), ref_features)
        if dist < hu_threshold:
            ys, xs = np.indices(patch.shape)
            weights = patch.astype(np.float64)
            cx = float((xs * weights).sum() / total) + x0
            cy = float((ys * weights).sum() / total) + y0
            detections.append(
                Detection(
                    box=box,
                    centroid=(cx, cy),
                    patch_sum=total,
                    hu_dist=float(dist),
                    frame_index=frame_index,
                    patch=patch.copy(),
                )
            )
    return detections
