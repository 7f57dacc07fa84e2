"""Infrared beacon recognition: codebook, simulator, pipeline, evaluation."""

from .codebook import (
    Codebook,
    Codeword,
    canonical_rotation,
    generate_codebook,
    is_ambiguous,
    load_codebook,
    rotations,
    save_codebook,
)
from .config import bundled_config_names, load_scene_config, parse_scene_config
from .decoder import (
    DecodeResult,
    DecoderState,
    count_identifier_bits,
    decode_bits,
    decode_track,
    orientation_bit,
)
from .detector import Detection, detect, propose, reference_symbol
from .imaging import (
    BoundingBox,
    DegeneratePatchError,
    Frame,
    HuFeature,
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
from .pipeline import (
    Pipeline,
    PipelineParams,
    RunMetrics,
    compute_metrics,
    format_machine,
    format_table,
    measure_throughput,
    run_frames,
)
from .sequence import read_sequence, read_truth, write_sequence
from .simulator import (
    BeaconSpec,
    CameraConfig,
    FrameTruth,
    MotionConfig,
    NoiseConfig,
    SceneConfig,
    peak_intensity,
    project,
    render_frame,
    simulate,
    symbol_bit,
    vehicle_position,
)
from .tracker import Track, Tracker, associate, prune

__version__ = "0.1.0"
