"""Plain-text scene configuration files and the bundled scenarios.

The format is one ``key = value`` pair per line; ``#`` starts a comment.
The ``beacon`` key may repeat, one line per beacon:

    beacon = <12 bits> <x_m> <y_m> <z_m> <phase_ms> [size_m]

Positions are world coordinates (x right of the lane center, y height
above ground, z along the road from the start position).
"""

from __future__ import annotations

from importlib import resources

from .codebook import Codeword
from .simulator import (
    DEFAULT_BIT_PERIOD_MS,
    BeaconSpec,
    CameraConfig,
    MotionConfig,
    NoiseConfig,
    SceneConfig,
)

DEFAULT_DURATION_S = 10.0

_SCALAR_KEYS = {
    "profile": str,
    "start_position_m": float,
    "cruise_speed_mps": float,
    "acceleration_mps2": float,
    "duration_s": float,
    "focal_px": float,
    "image_width": int,
    "image_height": int,
    "frame_rate_hz": float,
    "exposure_noise_floor": float,
    "camera_height_m": float,
    "bloom_sigma_px": float,
    "clutter_rate": float,
    "bit_period_ms": float,
}


class SceneConfigError(ValueError):
    """Raised for malformed scene configuration files."""


def parse_scene_config(text: str, name: str = "<config>") -> tuple[SceneConfig, float]:
    """Parse configuration text into (SceneConfig, duration_s)."""
    values: dict = {}
    beacons: list[BeaconSpec] = []
    clutter_intensity = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SceneConfigError(f"{name}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key == "beacon":
                parts = value.split()
                if len(parts) not in (5, 6):
                    raise ValueError("beacon needs: bits x y z phase_ms [size_m]")
                bits = Codeword(parts[0]).bits  # validates length and alphabet
                x, y, z, phase = (float(p) for p in parts[1:5])
                size = float(parts[5]) if len(parts) == 6 else BeaconSpec.size_m
                beacons.append(BeaconSpec(bits, (x, y, z), size, phase))
            elif key == "clutter_intensity":
                lo, hi = (float(p) for p in value.split())
                clutter_intensity = (lo, hi)
            elif key in _SCALAR_KEYS:
                values[key] = _SCALAR_KEYS[key](value)
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise SceneConfigError(f"{name}:{lineno}: {exc}") from exc

    if not beacons:
        raise SceneConfigError(f"{name}: at least one beacon line is required")

    camera = CameraConfig(
        focal_px=values.get("focal_px", CameraConfig.focal_px),
        width=values.get("image_width", CameraConfig.width),
        height=values.get("image_height", CameraConfig.height),
        frame_rate_hz=values.get("frame_rate_hz", CameraConfig.frame_rate_hz),
        exposure_noise_floor=values.get("exposure_noise_floor", CameraConfig.exposure_noise_floor),
        mount_height_m=values.get("camera_height_m", CameraConfig.mount_height_m),
    )
    motion = MotionConfig(
        profile=values.get("profile", MotionConfig.profile),
        start_position_m=values.get("start_position_m", MotionConfig.start_position_m),
        cruise_speed_mps=values.get("cruise_speed_mps", MotionConfig.cruise_speed_mps),
        acceleration_mps2=values.get("acceleration_mps2", MotionConfig.acceleration_mps2),
    )
    noise = NoiseConfig(
        bloom_sigma_px=values.get("bloom_sigma_px", NoiseConfig.bloom_sigma_px),
        clutter_rate=values.get("clutter_rate", NoiseConfig.clutter_rate),
        clutter_intensity=clutter_intensity or NoiseConfig.clutter_intensity,
    )
    try:
        config = SceneConfig(
            beacons=tuple(beacons),
            camera=camera,
            motion=motion,
            noise=noise,
            bit_period_ms=values.get("bit_period_ms", DEFAULT_BIT_PERIOD_MS),
        )
    except ValueError as exc:
        raise SceneConfigError(f"{name}: {exc}") from exc
    return config, values.get("duration_s", DEFAULT_DURATION_S)


def bundled_config_names() -> list[str]:
    """Names of the scenario files shipped with the package."""
    names = []
    for entry in resources.files("irbeacon.configs").iterdir():
        if entry.name.endswith(".cfg"):
            names.append(entry.name[: -len(".cfg")])
    return sorted(names)


def load_scene_config(name_or_path) -> tuple[SceneConfig, float]:
    """Load a scene config from a file path or a bundled scenario name."""
    path = str(name_or_path)
    if path.endswith(".cfg") or "/" in path or "\\" in path:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_scene_config(fh.read(), path)
    candidate = resources.files("irbeacon.configs").joinpath(path + ".cfg")
    if candidate.is_file():
        return parse_scene_config(candidate.read_text(encoding="utf-8"), path)
    raise FileNotFoundError(
        f"no such config {name_or_path!r}; bundled scenarios: {', '.join(bundled_config_names())}"
    )
