"""Storyboarding: re-segmentation, visual prompts, per-scene assets."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

from .config import AppConfig
from .errors import MuxFailure, SchemaViolation
from .media import frames
from .media.mp4 import Mp4File, write_mp4
from .providers.base import AudioClip, TextRequest, VideoClip
from .segmenting import preserves_text, segment_text
from .textutil import normalize_ws, word_count
from .voice import VoiceStyle

PADDING_S = 0.5
MIN_VISUAL_PROMPT_WORDS = 12

SEGMENT_STATUSES = ("pending", "generating", "ready", "failed")


@dataclass
class Segment:
    index: int
    text: str
    visual_prompt: str = ""
    status: str = "pending"


@dataclass
class SceneAsset:
    segment_index: int
    voiceover: AudioClip
    raw_video: VideoClip
    final_clip: bytes
    audio_duration_s: float
    video_duration_s: float
    manifest: dict = field(default_factory=dict)


def _prompt(name: str) -> str:
    return resources.files("paper2short").joinpath(
        f"prompts/storyboard/{name}.txt").read_text()


def resegment(gateway, edited_script_text: str) -> list[Segment]:
    """Split the edited script into scene beats.

    The provider result is only accepted if concatenating it reproduces
    the input (modulo whitespace); otherwise the local sentence-boundary
    segmenter takes over.
    """
    if not edited_script_text.strip():
        raise ValueError("script text must be non-empty")
    texts: list[str] | None = None
    try:
        data = gateway.complete_text(TextRequest(
            system_prompt=_prompt("resegment"),
            user_content=json.dumps({"script_text": edited_script_text}),
            response_schema="segments",
            temperature=0.2,
        ))
        candidate = [normalize_ws(s) for s in data["segments"] if s.strip()]
        if candidate and preserves_text(edited_script_text, candidate):
            texts = candidate
    except SchemaViolation:
        texts = None
    if texts is None:
        texts = segment_text(edited_script_text)
    return [Segment(index=i, text=t) for i, t in enumerate(texts, start=1)]


def generate_visual_prompt(gateway, segment: Segment, max_rerequests: int = 2) -> str:
    """Descriptive prompt for the video model: subject, mood/style and
    camera action; must be detailed (>= 12 words) and not echo the
    script line."""
    if not segment.text.strip():
        raise ValueError("segment text must be non-empty")
    base = json.dumps({"segment_text": segment.text})
    content = base
    reason = ""
    for _ in range(max_rerequests + 1):
        data = gateway.complete_text(TextRequest(
            system_prompt=_prompt("visual_prompt"),
            user_content=content,
            response_schema="visual_prompt",
            temperature=0.8,
        ))
        prompt = normalize_ws(data["prompt"])
        if word_count(prompt) < MIN_VISUAL_PROMPT_WORDS:
            reason = "prompt too short; give subject, mood, style and camera action"
        elif normalize_ws(segment.text).lower() in prompt.lower():
            reason = "prompt copies the script line verbatim; describe the visuals instead"
        else:
            return prompt
        content = base + f"\n\nRejected: {reason}."
    raise SchemaViolation(f"visual prompt rejected: {reason}")


def _mux_scene(video: VideoClip, audio: AudioClip, caption_text: str,
               config: AppConfig) -> bytes:
    """Burn captions onto the clip frames and mux in the voiceover."""
    container = Mp4File(video.media_bytes)
    vt = container.video_track()
    if vt is None:
        raise MuxFailure("video clip has no video track")
    overlay, alpha = frames.caption_overlay(
        caption_text, vt.width, vt.height, config.captions)
    burned = []
    seen: dict[bytes, bytes] = {}  # repeated source frames burn once
    for jpeg in container.video_frames():
        out = seen.get(jpeg)
        if out is None:
            frame = frames.decode_jpeg(jpeg)
            frame = frames.composite(frame, overlay, alpha)
            out = frames.encode_jpeg(frame, config.video.jpeg_quality)
            seen[jpeg] = out
        burned.append(out)
    pcm = audio.pcm()
    target = round(len(burned) / vt.timescale * audio.sample_rate) * 2
    pcm = pcm + b"\0" * max(0, target - len(pcm)) if len(pcm) < target else pcm[:target]
    return write_mp4(burned, vt.timescale, vt.width, vt.height, pcm,
                     audio.sample_rate)


def generate_scene(gateway, segment: Segment, style: VoiceStyle,
                   config: AppConfig | None = None, variant: int = 0,
                   cached_audio: AudioClip | None = None) -> SceneAsset:
    """Voiceover first, then video at audio duration + half a second of
    padding, then caption burn-in and muxing."""
    if not segment.visual_prompt:
        raise ValueError("segment has no visual prompt")
    config = config or AppConfig()
    audio = cached_audio or gateway.synthesize_speech(style.merged_prompt, segment.text)
    video = gateway.generate_video(segment.visual_prompt,
                                   audio.duration_s + PADDING_S, variant)
    final_clip = _mux_scene(video, audio, segment.text, config)
    measured = Mp4File(final_clip)
    vt = measured.video_track()
    manifest = {
        "text": segment.text,
        "audio_duration_s": audio.duration_s,
        "video_duration_s": vt.duration_s,
        "padding_s": PADDING_S,
        "prompt": segment.visual_prompt,
        "provider_ids": {
            "speech": config.providers.speech,
            "video": config.providers.video,
            "variant": variant,
        },
        "content_hash": hashlib.sha256(final_clip).hexdigest(),
    }
    return SceneAsset(
        segment_index=segment.index,
        voiceover=audio,
        raw_video=video,
        final_clip=final_clip,
        audio_duration_s=audio.duration_s,
        video_duration_s=vt.duration_s,
        manifest=manifest,
    )


def regenerate_visual(gateway, segment: Segment, style: VoiceStyle,
                      prior: SceneAsset | None,
                      config: AppConfig | None = None,
                      variant: int = 1) -> SceneAsset:
    """New video for the same segment; the cached voiceover is reused
    when the text is unchanged."""
    cached = None
    if prior is not None and prior.manifest.get("text") == segment.text:
        cached = prior.voiceover
    return generate_scene(gateway, segment, style, config=config,
                          variant=variant, cached_audio=cached)
