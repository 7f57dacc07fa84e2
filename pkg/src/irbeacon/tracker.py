"""Frame-to-frame association of detections into persistent tracks.

Association is greedy nearest-centroid: candidate pairs are consumed in
ascending distance until the pool is exhausted or the distance cap is hit.
Unmatched detections open new tracks; tracks unmatched for more than the
configured number of frames are retired.  Each track owns the decoder
state that accumulates its bit stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .decoder import DecoderState

DEFAULT_MAX_DISTANCE = 50.0
DEFAULT_MAX_UNMATCHED = 30


@dataclass
class Track:
    """One persistent beacon hypothesis."""

    track_id: int
    last_centroid: tuple[float, float]
    last_matched_frame: int
    age_unmatched: int = 0
    history: list = field(default_factory=list)
    decoder: DecoderState = field(default_factory=DecoderState)
    degenerate_samples: int = 0

    @property
    def first_frame(self) -> int:
        return self.history[0][0] if self.history else self.last_matched_frame

    def add_sample(self, frame_index: int, centroid, orientation: int, degenerate: bool = False) -> None:
        """Record a matched detection and advance the decoder."""
        self.last_centroid = (float(centroid[0]), float(centroid[1]))
        self.last_matched_frame = frame_index
        self.age_unmatched = 0
        self.history.append((frame_index, self.last_centroid, orientation))
        if degenerate:
            self.degenerate_samples += 1
        self.decoder.step(orientation, frame_index)


def associate(tracks, detections, max_dist: float = DEFAULT_MAX_DISTANCE):
    """Greedy smallest-distance-first assignment of detections to tracks.

    Returns (pairs, unmatched_track_indices, unmatched_detection_indices)
    with pairs as (track_index, detection_index).  Distance ties resolve
    by lower track id, then detection scan order, keeping runs repeatable.
    """
    candidates = []
    for ti, track in enumerate(tracks):
        tx, ty = track.last_centroid
        for di, det in enumerate(detections):
            d = math.hypot(det.centroid[0] - tx, det.centroid[1] - ty)
            if d <= max_dist:
                candidates.append((d, track.track_id, di, ti))
    candidates.sort()
    used_tracks = set()
    used_dets = set()
    pairs = []
    for _, _, di, ti in candidates:
        if ti in used_tracks or di in used_dets:
            continue
        used_tracks.add(ti)
        used_dets.add(di)
        pairs.append((ti, di))
    unmatched_tracks = [i for i in range(len(tracks)) if i not in used_tracks]
    unmatched_dets = [i for i in range(len(detections)) if i not in used_dets]
    return pairs, unmatched_tracks, unmatched_dets


def prune(tracks, max_unmatched: int = DEFAULT_MAX_UNMATCHED):
    """Split tracks into (alive, retired) by unmatched age."""
    alive = [t for t in tracks if t.age_unmatched <= max_unmatched]
    retired = [t for t in tracks if t.age_unmatched > max_unmatched]
    return alive, retired


class Tracker:
    """Sequential multi-target tracker; feed frames in order."""

    def __init__(
        self,
        max_dist: float = DEFAULT_MAX_DISTANCE,
        max_unmatched: int = DEFAULT_MAX_UNMATCHED,
        decoder_factory=DecoderState,
    ):
        self.max_dist = max_dist
        self.max_unmatched = max_unmatched
        self.decoder_factory = decoder_factory
        self.tracks: list[Track] = []
        self.total_created = 0

    def _new_track(self, frame_index: int, det, orientation: int, degenerate: bool) -> Track:
        track = Track(
            track_id=self.total_created,
            last_centroid=det.centroid,
            last_matched_frame=frame_index,
            decoder=self.decoder_factory(),
        )
        self.total_created += 1
        track.add_sample(frame_index, det.centroid, orientation, degenerate)
        return track

    def update(self, frame_index: int, detections, orientations) -> list[Track]:
        """Associate one frame's detections; returns tracks retired now.

        ``orientations`` holds one (bit, degenerate) pair per detection in
        the same order.
        """
        pairs, unmatched_tracks, unmatched_dets = associate(self.tracks, detections, self.max_dist)
        for ti, di in pairs:
            bit, degenerate = orientations[di]
            self.tracks[ti].add_sample(frame_index, detections[di].centroid, bit, degenerate)
        for ti in unmatched_tracks:
            self.tracks[ti].age_unmatched += 1
        for di in unmatched_dets:
            bit, degenerate = orientations[di]
            self.tracks.append(self._new_track(frame_index, detections[di], bit, degenerate))
        self.tracks, retired = prune(self.tracks, self.max_unmatched)
        return retired

    def close(self) -> list[Track]:
        """Retire every remaining track (end of sequence)."""
        remaining = self.tracks
        self.tracks = []
        return remaining
