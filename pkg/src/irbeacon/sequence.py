"""On-disk frame sequences: numbered PGM files plus a metadata sidecar.

A sequence directory holds ``frame_000000.pgm`` ... and ``sequence.jsonl``
with one JSON record per frame:

    {"frame_index": 0, "timestamp_s": 0.0, "vehicle_position_m": 0.0,
     "beacons": [{"beacon_id_bits": "...", "centroid_x": ..., "centroid_y": ...,
                  "visible": 1, "symbol_bit": 0, "distance_m": ...}]}

The ``beacons`` list is present only for simulator output; externally
converted recordings just carry frame_index and timestamp_s.
"""

from __future__ import annotations

import json
import math
import os

from .imaging import Frame, read_pgm, write_pgm
from .simulator import BeaconTruth, FrameTruth

SIDECAR_NAME = "sequence.jsonl"
FRAME_PATTERN = "frame_%06d.pgm"


class SequenceError(ValueError):
    """Raised for inconsistent sequence directories (missing frames etc.)."""


def frame_path(directory, index: int) -> str:
    return os.path.join(str(directory), FRAME_PATTERN % index)


def _truth_record(truth: FrameTruth) -> dict:
    record = {
        "frame_index": truth.frame_index,
        "timestamp_s": truth.timestamp_s,
        "vehicle_position_m": truth.vehicle_position_m,
    }
    beacons = []
    for b in truth.beacons:
        beacons.append(
            {
                "beacon_id_bits": b.id_bits,
                "centroid_x": None if math.isnan(b.centroid_x) else round(b.centroid_x, 3),
                "centroid_y": None if math.isnan(b.centroid_y) else round(b.centroid_y, 3),
                "visible": 1 if b.visible else 0,
                "symbol_bit": b.symbol_bit,
                "distance_m": None if math.isnan(b.distance_m) else round(b.distance_m, 3),
            }
        )
    record["beacons"] = beacons
    return record


def _truth_from_record(record: dict) -> FrameTruth:
    beacons = []
    for b in record.get("beacons", ()):
        beacons.append(
            BeaconTruth(
                id_bits=b["beacon_id_bits"],
                centroid_x=float("nan") if b.get("centroid_x") is None else float(b["centroid_x"]),
                centroid_y=float("nan") if b.get("centroid_y") is None else float(b["centroid_y"]),
                visible=bool(b.get("visible", 0)),
                symbol_bit=int(b.get("symbol_bit", 0)),
                distance_m=float("nan") if b.get("distance_m") is None else float(b["distance_m"]),
            )
        )
    return FrameTruth(
        frame_index=int(record["frame_index"]),
        timestamp_s=float(record["timestamp_s"]),
        vehicle_position_m=float(record.get("vehicle_position_m", 0.0)),
        beacons=tuple(beacons),
    )


def write_sequence(directory, stream) -> int:
    """Write (Frame, FrameTruth) pairs into a directory; returns frame count."""
    directory = str(directory)
    os.makedirs(directory, exist_ok=True)
    count = 0
    with open(os.path.join(directory, SIDECAR_NAME), "w", encoding="ascii", newline="\n") as sidecar:
        for frame, truth in stream:
            write_pgm(frame_path(directory, frame.index), frame.pixels)
            sidecar.write(json.dumps(_truth_record(truth), separators=(", ", ": ")) + "\n")
            count += 1
    return count


def read_truth(directory) -> list[FrameTruth]:
    """Parse the metadata sidecar of a sequence directory."""
    path = os.path.join(str(directory), SIDECAR_NAME)
    truths = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                truths.append(_truth_from_record(json.loads(line)))
            except (KeyError, ValueError) as exc:
                raise SequenceError(f"{path}:{lineno}: bad metadata record ({exc})") from exc
    return truths


def read_sequence(directory):
    """Yield (Frame, FrameTruth) pairs from a sequence directory, in order.

    Aborts with the first missing frame index so partial copies are caught
    rather than silently truncating a run.
    """
    directory = str(directory)
    truths = read_truth(directory)
    for truth in truths:
        path = frame_path(directory, truth.frame_index)
        if not os.path.exists(path):
            raise SequenceError(f"missing frame file for index {truth.frame_index}: {path}")
        pixels = read_pgm(path)
        yield Frame(pixels=pixels, index=truth.frame_index, timestamp=truth.timestamp_s), truth


def has_ground_truth(truths) -> bool:
    return any(t.beacons for t in truths)
