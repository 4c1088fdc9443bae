"""Uniform access to the text / speech / video capabilities.

The gateway owns retry policy (transient failures only), wall-clock
timeouts, per-capability in-flight limits, and the parse-and-repair loop
for structured text output.
"""
from __future__ import annotations

import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from importlib import resources

import jsonschema

from ..config import AppConfig, PROVIDER_ENV_KEYS
from ..errors import EmptyText, ProviderTimeout, ProviderUnavailable, RateLimited, SchemaViolation
from .base import AudioClip, ProviderPolicy, SpeechProvider, TextProvider, TextRequest, UnconfiguredProvider, VideoClip, VideoProvider
from .mock import MockSpeechProvider, MockTextProvider, MockVideoProvider

_TRANSIENT = (ProviderTimeout, RateLimited)

REPAIR_INSTRUCTION = (
    "\n\nYour previous response was rejected: {reason}. "
    "Respond again with JSON that is valid against the requested schema "
    "and nothing else."
)


def load_schema(schema_id: str) -> dict:
    ref = resources.files("paper2short").joinpath(f"schemas/{schema_id}.schema.json")
    try:
        return json.loads(ref.read_text())
    except FileNotFoundError as exc:
        raise KeyError(f"unknown response schema: {schema_id}") from exc


class ProviderGateway:
    def __init__(self, config: AppConfig | None = None,
                 text: TextProvider | None = None,
                 speech: SpeechProvider | None = None,
                 video: VideoProvider | None = None):
        self.config = config or AppConfig()
        pol = self.config.policy
        self.policy = ProviderPolicy(timeout_s=pol.timeout_s, max_retries=pol.max_retries,
                                     backoff_base_s=pol.backoff_base_s)
        self.text = text or self._build("text")
        self.speech = speech or self._build("speech")
        self.video = video or self._build("video")
        limit = max(1, pol.in_flight_limit)
        self._slots = {cap: threading.BoundedSemaphore(limit)
                       for cap in ("text", "speech", "video")}
        self._pool = ThreadPoolExecutor(max_workers=3 * limit,
                                        thread_name_prefix="provider")

    def _build(self, capability: str):
        selection = getattr(self.config.providers, capability)
        if selection.startswith("mock"):
            seed = int(selection.split(":", 1)[1]) if ":" in selection else 42
            if capability == "text":
                return MockTextProvider(seed)
            if capability == "speech":
                return MockSpeechProvider(seed)
            vf = self.config.video
            return MockVideoProvider(seed, vf.width, vf.height, vf.fps,
                                     vf.jpeg_quality, vf.min_clip_s, vf.max_clip_s)
        return UnconfiguredProvider(capability, PROVIDER_ENV_KEYS[capability])

    # -- policy enforcement -------------------------------------------

    def _call(self, capability: str, fn, *args, **kwargs):
        """Run an adapter call under the timeout, retrying transient
        failures up to max_retries (so max_retries+1 attempts total)."""
        last: Exception | None = None
        for attempt in range(self.policy.max_retries + 1):
            if attempt:
                time.sleep(self.policy.backoff_base_s * (2 ** (attempt - 1)))
            with self._slots[capability]:
                future = self._pool.submit(fn, *args, **kwargs)
                try:
                    return future.result(timeout=self.policy.timeout_s)
                except FutureTimeout:
                    future.cancel()
                    last = ProviderTimeout(
                        f"{capability} call exceeded {self.policy.timeout_s}s")
                except _TRANSIENT as exc:
                    last = exc
        raise last  # type: ignore[misc]

    # -- capabilities -------------------------------------------------

    def complete_text(self, req: TextRequest):
        """Plain or structured completion.

        With a response_schema set, invalid output triggers a repair
        retry (the rejection reason is appended to the request); after
        max_retries failures a SchemaViolation carrying the raw response
        is raised.
        """
        if req.response_schema is None:
            return self._call("text", self.text.complete, req)
        schema = load_schema(req.response_schema)
        attempt_req = req
        raw = ""
        reason = ""
        for attempt in range(self.policy.max_retries + 1):
            raw = self._call("text", self.text.complete, attempt_req)
            try:
                parsed = json.loads(raw)
                jsonschema.validate(parsed, schema)
                return parsed
            except json.JSONDecodeError as exc:
                reason = f"not valid JSON ({exc.msg})"
            except jsonschema.ValidationError as exc:
                reason = exc.message
            attempt_req = TextRequest(
                system_prompt=req.system_prompt,
                user_content=req.user_content + REPAIR_INSTRUCTION.format(reason=reason),
                response_schema=req.response_schema,
                temperature=req.temperature,
            )
        raise SchemaViolation(
            f"response failed schema '{req.response_schema}' after "
            f"{self.policy.max_retries + 1} attempts: {reason}", raw_response=raw)

    def synthesize_speech(self, style_prompt: str, script_text: str) -> AudioClip:
        if not script_text.strip():
            raise EmptyText("script_text is empty")
        clip = self._call("speech", self.speech.synthesize, style_prompt, script_text)
        if clip.duration_s <= 0:
            raise ProviderUnavailable("speech adapter returned a non-positive duration")
        return clip

    def generate_video(self, visual_prompt: str, duration_s: float,
                       variant: int = 0) -> VideoClip:
        clip = self._call("video", self.video.generate, visual_prompt,
                          duration_s, variant)
        if clip.duration_s <= 0:
            raise ProviderUnavailable("video adapter returned a non-positive duration")
        return clip

    def close(self):
        self._pool.shutdown(wait=False, cancel_futures=True)
