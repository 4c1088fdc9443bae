"""Runtime configuration.

Loaded from a JSON (or, when a TOML parser is importable, TOML) file and
overridable field by field. ``providers.*`` values name adapters; the
value ``mock:<seed>`` selects the deterministic in-process mocks.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, asdict
from pathlib import Path


@dataclass
class ProviderSelection:
    text: str = "mock:42"
    speech: str = "mock:42"
    video: str = "mock:42"


@dataclass
class PolicyConfig:
    timeout_s: float = 60.0
    max_retries: int = 2
    backoff_base_s: float = 0.5
    in_flight_limit: int = 4


@dataclass
class CaptionStyle:
    # Bottom-third centered white text with a black outline; size as a
    # fraction of frame height, wrapped at a fixed column.
    font_height_frac: float = 0.045
    wrap_chars: int = 28
    bottom_margin_frac: float = 0.12


@dataclass
class VideoFormat:
    width: int = 1080
    height: int = 1920
    fps: int = 30
    jpeg_quality: int = 85
    min_clip_s: float = 1.0
    max_clip_s: float = 15.0


@dataclass
class CreditConfig:
    tool_name: str = "PaperTok"
    duration_s: float = 2.0
    max_authors: int | None = None  # None: never truncate the author list


@dataclass
class EncoderConfig:
    # "builtin" uses the in-process muxer; anything else is treated as a
    # command template with {inputs}, {output} and {filtergraph} slots.
    command_template: str = "builtin"


@dataclass
class AppConfig:
    providers: ProviderSelection = field(default_factory=ProviderSelection)
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    captions: CaptionStyle = field(default_factory=CaptionStyle)
    video: VideoFormat = field(default_factory=VideoFormat)
    credit: CreditConfig = field(default_factory=CreditConfig)
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    ingest_char_budget: int = 120_000
    scene_concurrency: int = 4
    jargon_file: str | None = None  # defaults to the packaged list

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "AppConfig":
        cfg = cls()
        for section, value in data.items():
            if not hasattr(cfg, section):
                raise KeyError(f"unknown config key: {section}")
            current = getattr(cfg, section)
            if isinstance(value, dict):
                for k, v in value.items():
                    if not hasattr(current, k):
                        raise KeyError(f"unknown config key: {section}.{k}")
                    setattr(current, k, v)
            else:
                setattr(cfg, section, value)
        return cfg

    @classmethod
    def load(cls, path: str | os.PathLike) -> "AppConfig":
        p = Path(path)
        text = p.read_text()
        if p.suffix == ".toml":
            try:
                import tomllib  # type: ignore[import-not-found]
            except ModuleNotFoundError as exc:
                raise RuntimeError(
                    "TOML config requires Python >= 3.11; use JSON instead"
                ) from exc
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
        return cls.from_dict(data)


# Speech pacing used everywhere a duration is estimated from text.
WORDS_PER_SECOND = 3.0

PROVIDER_ENV_KEYS = {
    "text": "PROVIDER_TEXT_KEY",
    "speech": "PROVIDER_SPEECH_KEY",
    "video": "PROVIDER_VIDEO_KEY",
}
