"""Rasterization of the two diagonal transmission symbols and clutter shapes.

Symbols are drawn on a supersampled grid, optionally convolved with a
Gaussian bloom kernel (the point-spread halo that keeps far beacons'
orientation readable), then box-filtered down to pixel resolution.  Bit 1
maps to the top-left-to-bottom-right diagonal ("\\"), bit 0 to the other
one; with y growing downward this gives the bit-1 symbol positive xy
covariance, matching the decoder's orientation rule.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

SYMBOL_ASPECT = 4.0  # bar length : width
SUPERSAMPLE = 4


def _subpixel_grid(shape_px: tuple[int, int], ss: int):
    """Centers of supersampled cells, in pixel coordinates of the patch."""
    h, w = shape_px
    ys = (np.arange(h * ss) + 0.5) / ss
    xs = (np.arange(w * ss) + 0.5) / ss
    return np.meshgrid(xs, ys)


def _finish(mask: np.ndarray, ss: int, bloom_sigma: float, peak: float) -> np.ndarray:
    """Bloom at supersampled resolution, downsample, scale to peak intensity."""
    field = mask.astype(np.float64)
    if bloom_sigma > 0.0:
        field = ndimage.gaussian_filter(field, sigma=bloom_sigma * ss, mode="constant")
    h, w = field.shape[0] // ss, field.shape[1] // ss
    field = field.reshape(h, ss, w, ss).mean(axis=(1, 3))
    top = field.max()
    if top > 0.0:
        field *= peak / top
    return field


def render_bar(
    shape_px: tuple[int, int],
    center: tuple[float, float],
    length: float,
    width: float,
    orientation_bit: int,
    bloom_sigma: float = 0.0,
    peak: float = 255.0,
    ss: int = SUPERSAMPLE,
) -> np.ndarray:
    """Anti-aliased filled bar along one of the two diagonals.

    ``center``/``length``/``width`` are in pixel units of the returned
    patch; the brightest pixel lands at ``peak``.
    """
    xs, ys = _subpixel_grid(shape_px, ss)
    dx = xs - center[0]
    dy = ys - center[1]
    inv = np.sqrt(0.5)
    if orientation_bit:
        along = (dx + dy) * inv
        across = (dx - dy) * inv
    else:
        along = (dx - dy) * inv
        across = (dx + dy) * inv
    mask = (np.abs(along) <= length / 2.0) & (np.abs(across) <= width / 2.0)
    return _finish(mask, ss, bloom_sigma, peak)


def render_symbol(
    bit: int,
    apparent_size: float,
    shape_px: tuple[int, int],
    center: tuple[float, float],
    bloom_sigma: float = 0.0,
    peak: float = 255.0,
) -> np.ndarray:
    """The transmission symbol for ``bit`` at a given apparent beacon size.

    The bar spans the beacon square corner to corner, so its length is
    sqrt(2) times the apparent size and its width follows SYMBOL_ASPECT.
    """
    length = apparent_size * np.sqrt(2.0)
    return render_bar(shape_px, center, length, length / SYMBOL_ASPECT, bit, bloom_sigma, peak)


def render_disk(
    shape_px: tuple[int, int],
    center: tuple[float, float],
    radius: float,
    bloom_sigma: float = 0.0,
    peak: float = 255.0,
    ss: int = SUPERSAMPLE,
) -> np.ndarray:
    """Anti-aliased filled disk, used for clutter and gate-rejection tests."""
    xs, ys = _subpixel_grid(shape_px, ss)
    mask = (xs - center[0]) ** 2 + (ys - center[1]) ** 2 <= radius * radius
    return _finish(mask, ss, bloom_sigma, peak)
