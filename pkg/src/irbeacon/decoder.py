"""Bit recovery from tracked beacon patches.

Each tracked detection contributes one orientation estimate per frame.  A
seven-sample sliding window feeds a Schmitt trigger (thresholds 2 and 4):
crossing the upper threshold emits a 1, crossing the lower one emits a 0.
Because a symbol lasts seven frames, a level that holds longer than one
bit period without a new transition is re-emitted on a seven-frame clock,
which recovers runs of repeated symbols.

The emitted stream is unsynchronized, so identifier matching scans every
cyclic rotation of the candidate codewords.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .codebook import Codebook, Codeword, rotations
from .imaging import _as_pixels, _central_moments_to3

WINDOW_LEN = 7
K_LOW = 2
K_HIGH = 4
BIT_PERIOD_FRAMES = 7


def orientation_bit(patch) -> tuple[int, bool]:
    """Symbol orientation of a grayscale patch: (bit, degenerate_flag).

    The axis angle is 0.5 * atan2(2*mu11, mu20 - mu02); positive angles
    (in image coordinates, y down) map to bit 1.  Patches with no usable
    anisotropy return bit 0 with the flag set so callers can keep the
    sample cadence aligned instead of dropping frames.
    """
    p = np.asarray(_as_pixels(patch), dtype=np.float64)
    mu, _, _ = _central_moments_to3(p)
    m11 = mu[(1, 1)]
    diff = mu[(2, 0)] - mu[(0, 2)]
    # Scale-aware zero test: moments grow with mass times extent squared.
    tol = 1e-9 * max(1.0, mu[(0, 0)]) * max(p.shape) ** 2
    if abs(m11) <= tol and abs(diff) <= tol:
        return 0, True
    theta = 0.5 * math.atan2(2.0 * m11, diff)
    return (1 if theta > 0.0 else 0), False


@dataclass
class DecoderState:
    """Sliding window, Schmitt trigger level, and the emitted bit stream."""

    window_len: int = WINDOW_LEN
    k_low: int = K_LOW
    k_high: int = K_HIGH
    bit_period_frames: int = BIT_PERIOD_FRAMES
    window: deque = field(default_factory=lambda: deque(maxlen=WINDOW_LEN))
    level: int | None = None
    last_emit_frame: int | None = None
    prev_sum: int | None = None
    bits: list[int] = field(default_factory=list)
    emit_frames: list[int] = field(default_factory=list)
    transition_frames: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.window.maxlen != self.window_len:
            self.window = deque(self.window, maxlen=self.window_len)

    @property
    def bit_string(self) -> str:
        return "".join("01"[b] for b in self.bits)

    def _emit(self, bit: int, frame_index: int) -> None:
        self.bits.append(bit)
        self.emit_frames.append(frame_index)

    def step(self, orientation: int, frame_index: int) -> int | None:
        """Consume one orientation sample; return the emitted bit, if any.

        A transition fires when the window sum strictly exceeds the high
        threshold (or strictly undercuts the low one) while the trigger
        holds the other level.  The sum must genuinely cross: while the
        window is still filling the sum is trivially small, and treating
        that as a falling edge would emit a phantom leading zero.
        Otherwise, once the previous emission is more than one bit period
        old the held level is emitted again and the emission clock
        advances by exactly one period, so repeated symbols keep their
        cadence even without transitions.
        """
        prev = self.prev_sum
        self.window.append(1 if orientation else 0)
        n = sum(self.window)
        self.prev_sum = n
        if n > self.k_high and self.level != 1 and prev is not None and prev <= self.k_high:
            self.level = 1
            self.last_emit_frame = frame_index
            self.transition_frames.append(frame_index)
            self._emit(1, frame_index)
            return 1
        if n < self.k_low and self.level != 0 and prev is not None and prev >= self.k_low:
            self.level = 0
            self.last_emit_frame = frame_index
            self.transition_frames.append(frame_index)
            self._emit(0, frame_index)
            return 0
        if (
            self.level is not None
            and self.last_emit_frame is not None
            and frame_index - self.last_emit_frame > self.bit_period_frames
        ):
            self.last_emit_frame += self.bit_period_frames
            self._emit(self.level, self.last_emit_frame)
            return self.level
        return None


def count_identifier_bits(bits: str, id_bits) -> tuple[int, int, tuple[int, ...]]:
    """Split a decoded stream into identifier occurrences and error bits.

    Non-overlapping occurrences of the identifier are consumed left to
    right.  The leading residue counts as correct when it is a suffix of
    the identifier (the tail of a transmission already in progress), the
    trailing residue when it is a prefix (a transmission cut short); every
    other leftover bit is an error bit.  Returns
    (correct, error, occurrence_start_positions); with no occurrence at
    all the split is undefined and (0, 0, ()) is returned.
    """
    pattern = id_bits.bits if isinstance(id_bits, Codeword) else str(id_bits)
    occurrences = []
    pos = bits.find(pattern)
    while pos != -1:
        occurrences.append(pos)
        pos = bits.find(pattern, pos + len(pattern))
    if not occurrences:
        return 0, 0, ()
    correct = len(occurrences) * len(pattern)
    error = 0
    prefix = bits[: occurrences[0]]
    if pattern.endswith(prefix):
        correct += len(prefix)
    else:
        error += len(prefix)
    suffix = bits[occurrences[-1] + len(pattern) :]
    if pattern.startswith(suffix):
        correct += len(suffix)
    else:
        error += len(suffix)
    for prev, nxt in zip(occurrences, occurrences[1:]):
        error += nxt - (prev + len(pattern))
    return correct, error, tuple(occurrences)


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of matching one track's bit stream against the codebook."""

    bits: str
    matched: Codeword | None
    matched_rotation: str | None
    correct_bits: int
    error_bits: int
    occurrences: tuple[int, ...]
    first_match_frame: int | None
    last_match_frame: int | None


def _occurrence_count(bits: str, pattern: str) -> int:
    count = 0
    pos = bits.find(pattern)
    while pos != -1:
        count += 1
        pos = bits.find(pattern, pos + len(pattern))
    return count


def decode_bits(bits: str, codebook: Codebook, emit_frames=None) -> DecodeResult:
    """Find the codebook entry whose rotations best explain a bit stream.

    Every rotation of every entry is scanned because the stream has no
    symbol alignment; the entry with the most non-overlapping occurrences
    wins, ties going to the smaller identifier value.  Error accounting
    runs against the winning rotation.
    """
    best = None  # (count, id_value, rotation_index, entry, rotation)
    for entry in codebook:
        for rot_index, rot in enumerate(rotations(entry.bits)):
            count = _occurrence_count(bits, rot)
            if count == 0:
                continue
            key = (-count, entry.id_value, rot_index)
            if best is None or key < best[0]:
                best = (key, entry, rot)
    if best is None:
        return DecodeResult(bits, None, None, 0, 0, (), None, None)
    _, entry, rot = best
    correct, error, occurrences = count_identifier_bits(bits, rot)
    first_frame = last_frame = None
    if emit_frames is not None and occurrences:
        first_frame = emit_frames[occurrences[0] + len(rot) - 1]
        last_frame = emit_frames[occurrences[-1] + len(rot) - 1]
    return DecodeResult(bits, entry, rot, correct, error, occurrences, first_frame, last_frame)


def decode_track(track, codebook: Codebook) -> DecodeResult:
    """Decode a track's accumulated state against the codebook."""
    if not track.history:
        raise ValueError("cannot decode a track with empty history")
    state = track.decoder
    return decode_bits(state.bit_string, codebook, state.emit_frames)
