"""Frames, binarization, connected components, image moments and PGM files.

Image coordinates follow the usual raster convention: x grows to the right
(columns), y grows downward (rows).  All moment computations run on the
grayscale pixel values, treating intensity as mass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_WIDTH = 1600
DEFAULT_HEIGHT = 1200

# Pixels this close (Chebyshev) end up in one component; equals one 3x3
# dilation pass followed by 8-connected labeling.
MERGE_RADIUS = 3

# Beyond these sizes the sparse run-linkage path degrades; hand off to scipy.
_DENSE_PIXEL_LIMIT = 400_000
_DENSE_PAIR_LIMIT = 4_000_000


class DegeneratePatchError(ValueError):
    """Raised when a patch has zero total intensity and no centroid exists."""


class PgmFormatError(ValueError):
    """Raised when a file is not a strict binary PGM as produced here."""


@dataclass(frozen=True)
class Frame:
    """One monochrome camera image with its index and capture time."""

    pixels: np.ndarray
    index: int = 0
    timestamp: float = 0.0

    def __post_init__(self):
        if self.pixels.ndim != 2:
            raise ValueError("frame pixels must be a 2-D array")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True, order=True)
class BoundingBox:
    """Axis-aligned pixel box; (x, y) is the top-left corner."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError("bounding box must span at least one pixel")

    @property
    def area(self) -> int:
        return self.w * self.h


def _as_pixels(image) -> np.ndarray:
    return image.pixels if isinstance(image, Frame) else np.asarray(image)


def binarize(image, threshold: int = 5) -> np.ndarray:
    """Zero everything below ``threshold``; pixels at or above become 1."""
    pixels = _as_pixels(image)
    return (pixels >= threshold).astype(np.uint8)


def _flatnonzero_sparse(mask: np.ndarray) -> np.ndarray:
    """flatnonzero for a mostly-empty boolean mask.

    Scans the mask eight bytes at a time and only expands the rare nonzero
    words, which is several times faster than a full ``nonzero`` pass on a
    camera-sized frame.
    """
    flat = mask.reshape(-1)
    if flat.size % 8 or not flat.flags.c_contiguous or flat.dtype.itemsize != 1:
        return np.flatnonzero(flat)
    words = np.flatnonzero(flat.view(np.uint64))
    if words.size == 0:
        return words
    bytes_idx = (words[:, None] * 8 + np.arange(8)).reshape(-1)
    return bytes_idx[flat[bytes_idx] != 0]


def _boxes_from_runs(run_y, run_x0, run_x1, labels) -> list[BoundingBox]:
    boxes = {}
    for y, x0, x1, lab in zip(run_y, run_x0, run_x1, labels):
        cur = boxes.get(lab)
        if cur is None:
            boxes[lab] = [x0, y, x1, y]
        else:
            if x0 < cur[0]:
                cur[0] = x0
            if x1 > cur[2]:
                cur[2] = x1
            cur[3] = y  # runs arrive in ascending y
    out = [
        BoundingBox(int(x0), int(y0), int(x1 - x0 + 1), int(y1 - y0 + 1))
        for x0, y0, x1, y1 in boxes.values()
    ]
    out.sort(key=lambda b: (b.y, b.x))
    return out


def _components_scipy(binary: np.ndarray) -> list[BoundingBox]:
    from scipy import ndimage

    structure = np.ones((3, 3), dtype=bool)
    dilated = ndimage.binary_dilation(binary, structure=structure)
    labeled, count = ndimage.label(dilated, structure=structure)
    if count == 0:
        return []
    ys, xs = np.nonzero(binary)
    labs = labeled[ys, xs]
    boxes = []
    for lab in range(1, count + 1):
        sel = labs == lab
        if not sel.any():
            continue
        bx, by = xs[sel], ys[sel]
        boxes.append(
            BoundingBox(int(bx.min()), int(by.min()), int(bx.max() - bx.min() + 1), int(by.max() - by.min() + 1))
        )
    boxes.sort(key=lambda b: (b.y, b.x))
    return boxes


def connected_components(binary) -> list[BoundingBox]:
    """Group nonzero pixels into components and return their tight boxes.

    Grouping applies one 3x3 dilation pass before 8-connected labeling so
    that nearby fragments (for example the LED groups of one beacon) merge
    into a single proposal; the reported boxes bound the original pixels,
    not the dilated mask.  Boxes come back in scan order, topmost first.

    The fast path converts the mask to horizontal runs and single-links
    runs whose Chebyshev separation is at most 3, which is exactly the
    dilate-then-label result; degenerate dense inputs fall back to scipy.
    """
    mask = _as_pixels(binary)
    if mask.dtype == bool or mask.dtype == np.uint8:
        flat = _flatnonzero_sparse(mask)
    else:
        flat = np.flatnonzero(mask.reshape(-1))
    if flat.size == 0:
        return []
    if flat.size > _DENSE_PIXEL_LIMIT:
        return _components_scipy(mask != 0)
    w = mask.shape[1]
    ys = flat // w
    xs = flat - ys * w

    # Row-major order means runs are maximal stretches of consecutive indices
    # that do not wrap to a new row.
    breaks = np.flatnonzero((np.diff(flat) != 1) | (xs[1:] == 0))
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [flat.size - 1]))
    run_y = ys[starts]
    run_x0 = xs[starts]
    run_x1 = xs[ends]
    n_runs = run_y.size

    parent = list(range(n_runs))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # Candidate pairs: runs within MERGE_RADIUS rows of each other.
    lo = np.searchsorted(run_y, run_y - MERGE_RADIUS, side="left")
    counts = np.arange(n_runs) - lo
    total = int(counts.sum())
    if total > _DENSE_PAIR_LIMIT:
        return _components_scipy(mask != 0)
    if total:
        ii = np.repeat(np.arange(n_runs), counts)
        offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        jj = np.repeat(lo, counts) + offs
        near = (run_x0[ii] - MERGE_RADIUS <= run_x1[jj]) & (run_x0[jj] - MERGE_RADIUS <= run_x1[ii])
        for i, j in zip(ii[near].tolist(), jj[near].tolist()):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj

    labels = [find(i) for i in range(n_runs)]
    return _boxes_from_runs(run_y.tolist(), run_x0.tolist(), run_x1.tolist(), labels)


# --- image moments -----------------------------------------------------------


def centroid(patch) -> tuple[float, float]:
    """Intensity centroid (x, y) of a grayscale patch."""
    p = np.asarray(_as_pixels(patch), dtype=np.float64)
    total = p.sum()
    if total <= 0.0:
        raise DegeneratePatchError("patch has zero total intensity")
    ys, xs = np.indices(p.shape)
    return float((xs * p).sum() / total), float((ys * p).sum() / total)


def central_moment(patch, i: int, j: int) -> float:
    """Central moment of order i+j, weighting pixels by grayscale intensity."""
    p = np.asarray(_as_pixels(patch), dtype=np.float64)
    xbar, ybar = centroid(p)
    ys, xs = np.indices(p.shape)
    return float((((xs - xbar) ** i) * ((ys - ybar) ** j) * p).sum())


def _central_moments_to3(p: np.ndarray):
    """All central moments up to third order in one pass."""
    total = p.sum()
    if total <= 0.0:
        raise DegeneratePatchError("patch has zero total intensity")
    ys, xs = np.indices(p.shape)
    xbar = (xs * p).sum() / total
    ybar = (ys * p).sum() / total
    dx = xs - xbar
    dy = ys - ybar
    dx2 = dx * dx
    dy2 = dy * dy
    mu = {
        (0, 0): total,
        (1, 1): (dx * dy * p).sum(),
        (2, 0): (dx2 * p).sum(),
        (0, 2): (dy2 * p).sum(),
        (3, 0): (dx2 * dx * p).sum(),
        (0, 3): (dy2 * dy * p).sum(),
        (2, 1): (dx2 * dy * p).sum(),
        (1, 2): (dx * dy2 * p).sum(),
    }
    return mu, float(xbar), float(ybar)


@dataclass(frozen=True)
class HuFeature:
    """The seven rotation/scale/translation-invariant moment combinations."""

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    c7: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5, self.c6, self.c7])


def hu_features(patch) -> HuFeature:
    """Hu invariants of a grayscale patch.

    Central moments are normalized by total intensity raised to
    (order/2 + 1), then combined into the classical seven invariants.
    The patch is first cropped to its nonzero support so that embedding
    the same content at a different offset gives bit-identical values
    (floating point summation would otherwise differ with the absolute
    coordinates).
    """
    p = np.asarray(_as_pixels(patch), dtype=np.float64)
    nz = np.nonzero(p)
    if nz[0].size:
        p = p[nz[0].min() : nz[0].max() + 1, nz[1].min() : nz[1].max() + 1]
    mu, _, _ = _central_moments_to3(p)
    m00 = mu[(0, 0)]

    def eta(i, j):
        return mu[(i, j)] / m00 ** ((i + j) / 2.0 + 1.0)

    n20, n02, n11 = eta(2, 0), eta(0, 2), eta(1, 1)
    n30, n03, n21, n12 = eta(3, 0), eta(0, 3), eta(2, 1), eta(1, 2)

    a = n30 + n12
    b = n21 + n03
    c = n30 - 3.0 * n12
    d = 3.0 * n21 - n03

    return HuFeature(
        c1=n20 + n02,
        c2=(n20 - n02) ** 2 + 4.0 * n11**2,
        c3=c**2 + d**2,
        c4=a**2 + b**2,
        c5=c * a * (a**2 - 3.0 * b**2) + d * b * (3.0 * a**2 - b**2),
        c6=(n20 - n02) * (a**2 - b**2) + 4.0 * n11 * a * b,
        c7=d * a * (a**2 - 3.0 * b**2) - c * b * (3.0 * a**2 - b**2),
    )


# Invariants below this magnitude carry no shape information, only floating
# point and discretization residue; the reciprocal-log transform would blow
# such residue up into large spurious terms.  The cut sits well above float
# noise because gate patches can be as small as 3x3 pixels.
HU_ZERO_EPS = 3e-4


def _log_reciprocal(value: float) -> float | None:
    """1 / (sign(c) * log10|c|); None marks a skipped near-zero invariant."""
    if abs(value) < HU_ZERO_EPS:
        return None
    m = np.sign(value) * np.log10(abs(value))
    if m == 0.0:
        return float("inf")
    return 1.0 / m


def hu_distance_features(fa: HuFeature, fb: HuFeature) -> float:
    total = 0.0
    for ca, cb in zip(fa.as_array(), fb.as_array()):
        ra = _log_reciprocal(ca)
        rb = _log_reciprocal(cb)
        if ra is None or rb is None:
            continue
        total += abs(ra - rb)
    return total


def hu_distance(patch, reference) -> float:
    """Shape distance: sum over invariants of |1/m_i(patch) - 1/m_i(ref)|,
    where m_i = sign(c_i) * log10|c_i|.  Invariants that vanish on either
    side are skipped.
    """
    return hu_distance_features(hu_features(patch), hu_features(reference))


# --- strict binary PGM -------------------------------------------------------

_WHITESPACE = b" \t\r\n\x0b\x0c"


def write_pgm(path, image) -> None:
    """Write an 8-bit binary PGM (P5, maxval 255)."""
    pixels = np.ascontiguousarray(_as_pixels(image), dtype=np.uint8)
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(pixels.tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a strict binary PGM: magic P5, plain header, maxval 255.

    Comment lines and other maxvals are rejected on purpose; the sequence
    format pins this exact flavor.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise PgmFormatError(f"{path}: not a P5 PGM")
    pos = 2
    fields = []
    for _ in range(3):
        if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
            raise PgmFormatError(f"{path}: malformed header")
        while pos < len(data) and data[pos : pos + 1] in _WHITESPACE:
            pos += 1
        start = pos
        while pos < len(data) and data[pos : pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise PgmFormatError(f"{path}: malformed header")
        fields.append(int(data[start:pos]))
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise PgmFormatError(f"{path}: missing raster separator")
    pos += 1
    width, height, maxval = fields
    if maxval != 255:
        raise PgmFormatError(f"{path}: maxval must be 255, got {maxval}")
    raster = data[pos:]
    if len(raster) != width * height:
        raise PgmFormatError(
            f"{path}: raster has {len(raster)} bytes, expected {width * height}"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()
