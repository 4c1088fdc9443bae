"""Credit scene construction and final video assembly."""
from __future__ import annotations

import hashlib
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .config import AppConfig
from .errors import EncodeFailure, MissingScene
from .ingest import SourcePaper
from .media import frames
from .media.mp4 import Mp4File, concat_mp4, write_mp4
from .storyboard import SceneAsset

CREDIT_DURATION_S = 2.0

ATTRIBUTION_TEMPLATE = ("The original research is authored by {authors}. "
                        "This video is created {creator_clause}with {tool}.")


@dataclass
class CreditScene:
    attribution_text: str
    creator_name: str
    rendered_clip: bytes  # MP4, 2.0 s, silent audio track
    background_png: bytes = b""
    warnings: list[str] = field(default_factory=list)


@dataclass
class FinalVideo:
    media_bytes: bytes
    duration_s: float
    scene_order: list[int]
    manifest: dict


def join_authors(authors: list[str], max_authors: int | None = None) -> str:
    """Serial (Oxford-comma) join: "A", "A and B", "A, B, and C"; long
    lists optionally truncate to "A, B, C, et al."."""
    names = [a.strip() for a in authors if a.strip()]
    if not names:
        return "the original authors"
    if max_authors is not None and len(names) > max_authors:
        return ", ".join(names[:3]) + ", et al."
    if len(names) == 1:
        return names[0]
    if len(names) == 2:
        return f"{names[0]} and {names[1]}"
    return ", ".join(names[:-1]) + f", and {names[-1]}"


def default_attribution(authors: list[str], creator_name: str,
                        tool_name: str = "PaperTok",
                        max_authors: int | None = None) -> str:
    creator_clause = f"by {creator_name.strip()} " if creator_name.strip() else ""
    return ATTRIBUTION_TEMPLATE.format(
        authors=join_authors(authors, max_authors=max_authors),
        creator_clause=creator_clause,
        tool=tool_name,
    )


def build_credit_scene(paper: SourcePaper, creator_name: str,
                       override_text: str | None = None,
                       config: AppConfig | None = None) -> CreditScene:
    """2-second clip: first-page screenshot, attribution overlay, silent
    audio. Missing screenshots degrade to a solid background."""
    config = config or AppConfig()
    warnings = []
    if not paper.first_page_image:
        warnings.append("no first-page image; using solid background")
    if override_text is not None:
        text = override_text
    else:
        text = default_attribution(paper.authors, creator_name,
                                   tool_name=config.credit.tool_name,
                                   max_authors=config.credit.max_authors)
    vf = config.video
    frame = frames.render_credit_frame(paper.first_page_image or None, text,
                                       vf.width, vf.height, config.captions)
    jpeg = frames.encode_jpeg(frame, vf.jpeg_quality)
    n_frames = round(config.credit.duration_s * vf.fps)
    silence = b"\0" * (round(config.credit.duration_s * 24000) * 2)
    clip = write_mp4([jpeg] * n_frames, vf.fps, vf.width, vf.height,
                     silence, 24000)
    return CreditScene(attribution_text=text, creator_name=creator_name,
                       rendered_clip=clip,
                       background_png=paper.first_page_image,
                       warnings=warnings)


def _run_external_encoder(template: str, inputs: list[Path], output: Path):
    cmd = template.format(
        inputs=" ".join(shlex.quote(str(p)) for p in inputs),
        output=shlex.quote(str(output)),
        filtergraph="concat",
    )
    proc = subprocess.run(cmd, shell=True, capture_output=True)
    if proc.returncode != 0 or not output.exists():
        raise EncodeFailure(
            f"external encoder failed ({proc.returncode}): "
            f"{proc.stderr.decode(errors='replace')[:500]}")


def merge_video(scenes: list[SceneAsset], credit: CreditScene,
                config: AppConfig | None = None,
                manifest_version: int = 1) -> FinalVideo:
    """Concatenate scene clips in index order plus the trailing credit
    clip into one MP4 with a provenance manifest."""
    config = config or AppConfig()
    not_ready = [s.segment_index for s in scenes if not s.final_clip]
    if not scenes or not_ready:
        raise MissingScene(not_ready or [1])
    ordered = sorted(scenes, key=lambda s: s.segment_index)
    clips = [s.final_clip for s in ordered] + [credit.rendered_clip]

    if config.encoder.command_template == "builtin":
        blob = concat_mp4(clips)
    else:
        with tempfile.TemporaryDirectory() as tmp:
            paths = []
            for i, clip in enumerate(clips):
                p = Path(tmp) / f"clip_{i:03d}.mp4"
                p.write_bytes(clip)
                paths.append(p)
            out = Path(tmp) / "final.mp4"
            _run_external_encoder(config.encoder.command_template, paths, out)
            blob = out.read_bytes()

    parsed = Mp4File(blob)
    duration = parsed.duration_s
    cut_points = []
    t = 0.0
    for s in ordered:
        cut_points.append(round(t, 4))
        t += s.video_duration_s
    manifest = {
        "version": manifest_version,
        "duration_s": round(duration, 4),
        "scene_order": [s.segment_index for s in ordered],
        "cut_points_s": cut_points,
        "credit_start_s": round(t, 4),
        "credit": {
            "attribution_text": credit.attribution_text,
            "creator_name": credit.creator_name,
            "duration_s": config.credit.duration_s,
        },
        "total_padding_s": round(sum(
            s.manifest.get("padding_s", 0.0) for s in ordered), 4),
        "inputs": [
            {"segment_index": s.segment_index,
             "content_hash": s.manifest.get("content_hash",
                                            hashlib.sha256(s.final_clip).hexdigest()),
             "video_duration_s": s.video_duration_s}
            for s in ordered
        ] + [{"segment_index": None,
              "content_hash": hashlib.sha256(credit.rendered_clip).hexdigest(),
              "video_duration_s": config.credit.duration_s}],
        "content_hash": hashlib.sha256(blob).hexdigest(),
    }
    return FinalVideo(media_bytes=blob, duration_s=duration,
                      scene_order=[s.segment_index for s in ordered],
                      manifest=manifest)
