"""Frame rendering: mock clip frames, burned-in captions, credit frame.

All drawing is deterministic so repeated renders are byte-identical.
"""
from __future__ import annotations

import hashlib
import textwrap

import cv2
import numpy as np
from PIL import Image, ImageDraw

from ..config import CaptionStyle
from .fonts import load_font


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:12]


def prompt_color(prompt: str) -> tuple[int, int, int]:
    """Stable RGB background color for a visual prompt.

    Components are kept in 32..223 so white/black overlays stay legible
    and scene boundaries are detectable from a single pixel.
    """
    digest = hashlib.sha256(b"bg:" + prompt.encode("utf-8")).digest()
    return tuple(32 + (b % 192) for b in digest[:3])  # type: ignore[return-value]


def encode_jpeg(frame_rgb: np.ndarray, quality: int = 85) -> bytes:
    ok, buf = cv2.imencode(".jpg", cv2.cvtColor(frame_rgb, cv2.COLOR_RGB2BGR),
                           [cv2.IMWRITE_JPEG_QUALITY, quality])
    if not ok:
        raise RuntimeError("JPEG encode failed")
    return buf.tobytes()


def decode_jpeg(data: bytes) -> np.ndarray:
    frame = cv2.imdecode(np.frombuffer(data, np.uint8), cv2.IMREAD_COLOR)
    if frame is None:
        raise RuntimeError("JPEG decode failed")
    return cv2.cvtColor(frame, cv2.COLOR_BGR2RGB)


def render_mock_frame(prompt: str, frame_index: int, fps: int,
                      width: int, height: int) -> np.ndarray:
    """Solid-color frame stamped with the prompt hash and a timecode."""
    frame = np.empty((height, width, 3), np.uint8)
    frame[:] = prompt_color(prompt)
    img = Image.fromarray(frame)
    draw = ImageDraw.Draw(img)
    stamp_font = load_font(max(24, height // 24))
    tc = frame_index / fps
    draw.text((width // 20, height // 20), prompt_hash(prompt),
              font=stamp_font, fill=(255, 255, 255))
    draw.text((width // 20, height // 20 + height // 18),
              f"t={tc:07.3f}s f={frame_index:05d}",
              font=stamp_font, fill=(255, 255, 255))
    return np.asarray(img)


def caption_overlay(text: str, width: int, height: int,
                    style: CaptionStyle | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Pre-rendered caption layer as (rgb uint8, alpha float32).

    Rendering the text once and alpha-compositing per frame keeps the
    burn-in step cheap for multi-hundred-frame clips.
    """
    style = style or CaptionStyle()
    img = Image.new("RGBA", (width, height), (0, 0, 0, 0))
    draw = ImageDraw.Draw(img)
    size = max(10, round(height * style.font_height_frac))
    font = load_font(size)
    lines = textwrap.wrap(text, width=style.wrap_chars) or [""]
    line_h = round(size * 1.25)
    block_h = line_h * len(lines)
    y = height - round(height * style.bottom_margin_frac) - block_h
    stroke = max(2, size // 12)
    for line in lines:
        w = draw.textlength(line, font=font)
        draw.text(((width - w) / 2, y), line, font=font,
                  fill=(255, 255, 255, 255), stroke_width=stroke,
                  stroke_fill=(0, 0, 0, 255))
        y += line_h
    rgba = np.asarray(img)
    return rgba[:, :, :3], rgba[:, :, 3].astype(np.float32) / 255.0


def composite(frame_rgb: np.ndarray, overlay_rgb: np.ndarray,
              alpha: np.ndarray) -> np.ndarray:
    a = alpha[:, :, None]
    out = frame_rgb.astype(np.float32) * (1.0 - a) + overlay_rgb.astype(np.float32) * a
    return out.astype(np.uint8)


def draw_caption(frame_rgb: np.ndarray, text: str,
                 style: CaptionStyle | None = None) -> np.ndarray:
    """Burn the caption into the lower third: centered white text,
    black outline, wrapped at a fixed column."""
    height, width = frame_rgb.shape[:2]
    overlay, alpha = caption_overlay(text, width, height, style)
    return composite(frame_rgb, overlay, alpha)


def render_credit_frame(page_png: bytes | None, attribution_text: str,
                        width: int, height: int,
                        style: CaptionStyle | None = None) -> np.ndarray:
    """First-page screenshot (or dark fallback) with a semi-transparent
    band over the lower third carrying the attribution text."""
    style = style or CaptionStyle()
    canvas = np.full((height, width, 3), 24, np.uint8)
    if page_png:
        page = cv2.imdecode(np.frombuffer(page_png, np.uint8), cv2.IMREAD_COLOR)
        if page is not None:
            page = cv2.cvtColor(page, cv2.COLOR_BGR2RGB)
            ph, pw = page.shape[:2]
            scale = min(width / pw, height / ph)
            nw, nh = max(1, round(pw * scale)), max(1, round(ph * scale))
            page = cv2.resize(page, (nw, nh), interpolation=cv2.INTER_AREA)
            x0, y0 = (width - nw) // 2, (height - nh) // 2
            canvas[y0:y0 + nh, x0:x0 + nw] = page
    band_top = height * 2 // 3
    canvas[band_top:] = (canvas[band_top:] * 0.3).astype(np.uint8)
    img = Image.fromarray(canvas)
    draw = ImageDraw.Draw(img)
    size = max(10, round(height * style.font_height_frac))
    font = load_font(size)
    lines = textwrap.wrap(attribution_text, width=style.wrap_chars + 6) or [""]
    line_h = round(size * 1.3)
    y = band_top + (height - band_top - line_h * len(lines)) // 2
    for line in lines:
        w = draw.textlength(line, font=font)
        draw.text(((width - w) / 2, y), line, font=font, fill=(255, 255, 255))
        y += line_h
    return np.asarray(img)
