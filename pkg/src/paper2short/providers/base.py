"""Provider adapter contracts and shared request/response types."""
from __future__ import annotations

import io
import wave
from dataclasses import dataclass, field

from ..errors import EmptyText, ProviderUnavailable


@dataclass
class TextRequest:
    system_prompt: str
    user_content: str
    response_schema: str | None = None  # schema identifier, see schemas/
    temperature: float = 0.7

    def __post_init__(self):
        if not self.system_prompt.strip():
            raise ValueError("system_prompt must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be in [0, 2]")


@dataclass
class AudioClip:
    media_bytes: bytes  # WAV container, 16-bit mono PCM
    duration_s: float
    sample_rate: int

    @classmethod
    def from_wav(cls, data: bytes) -> "AudioClip":
        with wave.open(io.BytesIO(data)) as w:
            rate = w.getframerate()
            nframes = w.getnframes()
        return cls(media_bytes=data, duration_s=nframes / rate, sample_rate=rate)

    def pcm(self) -> bytes:
        with wave.open(io.BytesIO(self.media_bytes)) as w:
            return w.readframes(w.getnframes())


@dataclass
class VideoClip:
    media_bytes: bytes  # MP4 container, video track only
    duration_s: float
    width: int
    height: int


@dataclass
class ProviderPolicy:
    timeout_s: float = 60.0
    max_retries: int = 2
    backoff_base_s: float = 0.5


def pcm_to_wav(pcm: bytes, sample_rate: int) -> bytes:
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(sample_rate)
        w.writeframes(pcm)
    return buf.getvalue()


class TextProvider:
    def complete(self, req: TextRequest) -> str:
        raise NotImplementedError


class SpeechProvider:
    def synthesize(self, style_prompt: str, script_text: str) -> AudioClip:
        raise NotImplementedError


class VideoProvider:
    def generate(self, visual_prompt: str, duration_s: float, variant: int = 0) -> VideoClip:
        raise NotImplementedError


class UnconfiguredProvider(TextProvider, SpeechProvider, VideoProvider):
    """Placeholder for live adapters when no credential is present."""

    def __init__(self, capability: str, env_key: str):
        self.capability = capability
        self.env_key = env_key

    def _fail(self):
        raise ProviderUnavailable(
            f"no {self.capability} provider credential; set {self.env_key} "
            f"or select mock:<seed>")

    def complete(self, req: TextRequest) -> str:
        self._fail()

    def synthesize(self, style_prompt: str, script_text: str) -> AudioClip:
        if not script_text.strip():
            raise EmptyText("script_text is empty")
        self._fail()

    def generate(self, visual_prompt: str, duration_s: float, variant: int = 0) -> VideoClip:
        self._fail()
