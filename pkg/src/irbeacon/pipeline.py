"""End-to-end processing of frame sequences and the run metrics report.

Every frame flows through detect -> associate -> decoder step; tracks are
finalized when they retire or when the sequence ends.  When ground truth
is available, each beacon is credited with the tracks whose decoded bit
stream contains its identifier, and the vehicle position at the frame
completing each identifier occurrence yields the first/last recognition
distances.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .codebook import Codebook
from .decoder import DecoderState, DecodeResult, count_identifier_bits, decode_bits, orientation_bit
from .detector import AREA_MAX, AREA_MIN, DEFAULT_THRESHOLD, HU_GATE, detect
from .tracker import DEFAULT_MAX_DISTANCE, DEFAULT_MAX_UNMATCHED, Tracker


@dataclass(frozen=True)
class PipelineParams:
    """Every tunable of the processing chain, with its published default."""

    binarize_threshold: int = DEFAULT_THRESHOLD
    area_min: int = AREA_MIN
    area_max: int = AREA_MAX
    hu_threshold: float = HU_GATE
    assoc_max_dist: float = DEFAULT_MAX_DISTANCE
    prune_after: int = DEFAULT_MAX_UNMATCHED
    window_len: int = 7
    k_low: int = 2
    k_high: int = 4
    bit_period_frames: int = 7


@dataclass(frozen=True)
class TrackRecord:
    """A finished track with its decode outcome."""

    track_id: int
    first_frame: int
    last_frame: int
    n_samples: int
    result: DecodeResult
    emit_frames: tuple[int, ...]

    @property
    def bits(self) -> str:
        return self.result.bits


@dataclass(frozen=True)
class BeaconMetrics:
    id_bits: str
    tracks_matching: int
    first_recognition_m: float | None
    last_recognition_m: float | None
    bits_decoded: int
    correct_bits: int
    error_bits: int


@dataclass(frozen=True)
class RunMetrics:
    frames: int
    detections: int
    tracks: int
    per_beacon: tuple[BeaconMetrics, ...] = ()
    unmatched_track_ids: tuple[int, ...] = ()


class Pipeline:
    """Stateful runner; feed frames in order, then call finalize()."""

    def __init__(self, codebook: Codebook, params: PipelineParams = PipelineParams()):
        self.codebook = codebook
        self.params = params
        self.tracker = Tracker(
            max_dist=params.assoc_max_dist,
            max_unmatched=params.prune_after,
            decoder_factory=lambda: DecoderState(
                window_len=params.window_len,
                k_low=params.k_low,
                k_high=params.k_high,
                bit_period_frames=params.bit_period_frames,
            ),
        )
        self.records: list[TrackRecord] = []
        self.frames = 0
        self.detections = 0

    def _finish(self, track) -> None:
        result = decode_bits(track.decoder.bit_string, self.codebook, track.decoder.emit_frames)
        self.records.append(
            TrackRecord(
                track_id=track.track_id,
                first_frame=track.first_frame,
                last_frame=track.last_matched_frame,
                n_samples=len(track.history),
                result=result,
                emit_frames=tuple(track.decoder.emit_frames),
            )
        )

    def process(self, frame) -> int:
        """Run one frame through the chain; returns its detection count."""
        p = self.params
        detections = detect(
            frame,
            hu_threshold=p.hu_threshold,
            threshold=p.binarize_threshold,
            area_min=p.area_min,
            area_max=p.area_max,
        )
        orientations = [orientation_bit(d.patch) for d in detections]
        for track in self.tracker.update(frame.index, detections, orientations):
            self._finish(track)
        self.frames += 1
        self.detections += len(detections)
        return len(detections)

    def finalize(self) -> list[TrackRecord]:
        for track in self.tracker.close():
            self._finish(track)
        self.records.sort(key=lambda r: r.track_id)
        return self.records


def _beacon_metrics(id_bits: str, records, positions) -> BeaconMetrics:
    matching = []
    bits_total = 0
    correct_total = 0
    error_total = 0
    end_frames = []
    for record in records:
        correct, error, occurrences = count_identifier_bits(record.bits, id_bits)
        if not occurrences:
            continue
        matching.append(record)
        bits_total += len(record.bits)
        correct_total += correct
        error_total += error
        for pos in occurrences:
            end_frames.append(record.emit_frames[pos + len(id_bits) - 1])
    first = last = None
    if end_frames and positions:
        known = [f for f in end_frames if f in positions]
        if known:
            first = positions[min(known)]
            last = positions[max(known)]
    return BeaconMetrics(
        id_bits=id_bits,
        tracks_matching=len(matching),
        first_recognition_m=first,
        last_recognition_m=last,
        bits_decoded=bits_total,
        correct_bits=correct_total,
        error_bits=error_total,
    )


def compute_metrics(frames: int, detections: int, records, truths=None) -> RunMetrics:
    """Aggregate track records into the run report, joining ground truth if given."""
    if not truths:
        unmatched = tuple(r.track_id for r in records if r.result.matched is None)
        return RunMetrics(frames, detections, len(records), (), unmatched)

    positions = {t.frame_index: t.vehicle_position_m for t in truths}
    beacon_ids: list[str] = []
    for t in truths:
        for b in t.beacons:
            if b.id_bits not in beacon_ids:
                beacon_ids.append(b.id_bits)
    per_beacon = tuple(_beacon_metrics(bits, records, positions) for bits in beacon_ids)
    unmatched = tuple(
        r.track_id
        for r in records
        if all(not count_identifier_bits(r.bits, bits)[2] for bits in beacon_ids)
    )
    return RunMetrics(frames, detections, len(records), per_beacon, unmatched)


def run_frames(stream, codebook: Codebook, params: PipelineParams = PipelineParams()):
    """Process an iterable of (Frame, FrameTruth-or-None); returns (metrics, records)."""
    pipeline = Pipeline(codebook, params)
    truths = []
    for frame, truth in stream:
        pipeline.process(frame)
        if truth is not None:
            truths.append(truth)
    records = pipeline.finalize()
    has_truth = any(t.beacons for t in truths)
    metrics = compute_metrics(pipeline.frames, pipeline.detections, records, truths if has_truth else None)
    return metrics, records


def measure_throughput(frames, codebook: Codebook, params: PipelineParams = PipelineParams()) -> float:
    """Frames per second of the processing chain over pre-rendered frames."""
    pipeline = Pipeline(codebook, params)
    start = time.perf_counter()
    for frame in frames:
        pipeline.process(frame)
    pipeline.finalize()
    elapsed = time.perf_counter() - start
    return len(frames) / elapsed if elapsed > 0 else float("inf")


# --- report formatting --------------------------------------------------------


def _fmt_m(value) -> str:
    return "-" if value is None else f"{value:.1f}"


def format_table(metrics: RunMetrics) -> str:
    """Human-readable run report, one metric per row."""
    rows = [
        ("Frames", str(metrics.frames)),
        ("Detections", str(metrics.detections)),
        ("Tracks", str(metrics.tracks)),
    ]
    lines = []
    width = 28
    for label, value in rows:
        lines.append(f"{label:<{width}}{value:>10}")
    for bm in metrics.per_beacon:
        lines.append("")
        lines.append(f"Beacon {bm.id_bits}")
        sub = [
            ("  Tracks", str(bm.tracks_matching)),
            ("  First Recognition (m)", _fmt_m(bm.first_recognition_m)),
            ("  Last Recognition (m)", _fmt_m(bm.last_recognition_m)),
            ("  Bits Decoded", str(bm.bits_decoded)),
            ("  Error Bits", str(bm.error_bits)),
        ]
        for label, value in sub:
            lines.append(f"{label:<{width}}{value:>10}")
    if metrics.unmatched_track_ids:
        lines.append("")
        ids = ", ".join(str(i) for i in metrics.unmatched_track_ids)
        lines.append(f"Tracks matching no beacon: {ids}")
    return "\n".join(lines)


def format_machine(metrics: RunMetrics, records) -> str:
    """Line-oriented machine format: run totals, track records, beacon rows."""
    lines = [
        f"frames {metrics.frames}",
        f"detections {metrics.detections}",
        f"tracks {metrics.tracks}",
    ]
    for r in records:
        lines.append(format_track_record(r))
    for bm in metrics.per_beacon:
        lines.append(
            "beacon {bits} tracks_matching {tm} first_recognition_m {fm} "
            "last_recognition_m {lm} bits_decoded {bd} error_bits {eb}".format(
                bits=bm.id_bits,
                tm=bm.tracks_matching,
                fm=_fmt_m(bm.first_recognition_m),
                lm=_fmt_m(bm.last_recognition_m),
                bd=bm.bits_decoded,
                eb=bm.error_bits,
            )
        )
    return "\n".join(lines)


def format_track_record(record: TrackRecord) -> str:
    res = record.result
    return "track {tid} {matched} {nbits} {correct} {error} {first} {last} {bits}".format(
        tid=record.track_id,
        matched=res.matched.bits if res.matched else "-",
        nbits=len(res.bits),
        correct=res.correct_bits,
        error=res.error_bits,
        first="-" if res.first_match_frame is None else res.first_match_frame,
        last="-" if res.last_match_frame is None else res.last_match_frame,
        bits=res.bits if res.bits else "-",
    )


@dataclass(frozen=True)
class ParsedTrackRecord:
    track_id: int
    matched_bits: str | None
    n_bits: int
    correct_bits: int
    error_bits: int
    bits: str


def parse_track_record(line: str) -> ParsedTrackRecord:
    parts = line.split()
    if len(parts) != 9 or parts[0] != "track":
        raise ValueError(f"not a track record: {line!r}")
    return ParsedTrackRecord(
        track_id=int(parts[1]),
        matched_bits=None if parts[2] == "-" else parts[2],
        n_bits=int(parts[3]),
        correct_bits=int(parts[4]),
        error_bits=int(parts[5]),
        bits="" if parts[8] == "-" else parts[8],
    )


def evaluate_records(parsed_records, truths):
    """Join serialized track records with ground truth (the eval report).

    Returns (per_beacon: list[BeaconMetrics], unmatched_track_ids).  The
    recognition-distance fields stay empty here: distances need per-bit
    emission frames, which the on-disk record format does not carry.
    """
    beacon_ids: list[str] = []
    for t in truths:
        for b in t.beacons:
            if b.id_bits not in beacon_ids:
                beacon_ids.append(b.id_bits)
    per_beacon = []
    for bits in beacon_ids:
        matching = 0
        bits_total = correct_total = error_total = 0
        for rec in parsed_records:
            correct, error, occurrences = count_identifier_bits(rec.bits, bits)
            if occurrences:
                matching += 1
                bits_total += len(rec.bits)
                correct_total += correct
                error_total += error
        per_beacon.append(
            BeaconMetrics(bits, matching, None, None, bits_total, correct_total, error_total)
        )
    unmatched = tuple(
        rec.track_id
        for rec in parsed_records
        if all(not count_identifier_bits(rec.bits, bits)[2] for bits in beacon_ids)
    )
    return per_beacon, unmatched
