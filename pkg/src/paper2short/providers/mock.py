"""Deterministic in-process providers.

Every response is a pure function of (request, seed): repeated calls are
byte-identical, which is what CI and the golden-manifest checks depend
on. The text mock understands the pipeline's response schemas and
produces plausible structured output from the request content.
"""
from __future__ import annotations

import hashlib
import json
import random
import re

import numpy as np
from PIL import Image, ImageDraw

from ..errors import DurationOutOfRange, EmptyText
from ..segmenting import segment_text
from ..textutil import content_words, split_sentences, word_count
from ..media import frames
from ..media.fonts import load_font
from ..media.mp4 import write_mp4
from .base import AudioClip, SpeechProvider, TextProvider, TextRequest, VideoClip, VideoProvider, pcm_to_wav

MOCK_WORDS_PER_SECOND = 3.0

_TACTICS = ["contradiction", "surprise_irony", "personal_stakes", "curiosity"]

_HOOK_TEMPLATES = {
    "contradiction": "What if everything you believed about {kw} is wrong?",
    "surprise_irony": "Guess what researchers just discovered about {kw}?",
    "personal_stakes": "Could {kw} change your daily life?",
    "curiosity": "Why does {kw} matter more than you think?",
}

_IDEA_TEMPLATES = {
    "contradiction": "Everyone assumes the opposite, but this work on {kw} flips that belief on its head.",
    "surprise_irony": "The surprising twist: {kw} behaves nothing like people expect, and the data shows it.",
    "personal_stakes": "This touches you directly: {kw} shapes decisions in your everyday life without you noticing.",
    "curiosity": "There is a hidden mechanism behind {kw}, and the paper finally explains how it works.",
}

_MODIFIERS = [
    "with an urgent, cautionary tone",
    "with a warm, curious tone",
    "with an upbeat, playful energy",
    "with a calm, confident delivery",
    "with a serious and authoritative vibe",
]

_MOODS = ["dark and moody", "bright and optimistic", "sleek and futuristic",
          "warm and inviting", "dramatic high-contrast"]
_CAMERAS = ["subtle dolly zoom", "slow orbital pan", "handheld push-in",
            "overhead crane shot", "steady close-up tracking"]

_FILLER = ("and here is the part nobody expected because the evidence "
           "points somewhere completely different than most people would "
           "ever guess right now").split()


def _rng(seed: int, *parts: str) -> random.Random:
    digest = hashlib.sha256(("|".join((str(seed),) + parts)).encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _maybe_json(text: str):
    try:
        return json.loads(text)
    except (json.JSONDecodeError, ValueError):
        return None


_NAME_RE = re.compile(r"^[A-Z][\w.'\-]*$")


def _looks_like_name(chunk: str) -> bool:
    toks = chunk.split()
    if not 2 <= len(toks) <= 4:
        return False
    return all(_NAME_RE.match(t) for t in toks)


class MockTextProvider(TextProvider):
    def __init__(self, seed: int = 42):
        self.seed = seed

    def complete(self, req: TextRequest) -> str:
        handler = {
            "paper_meta": self._paper_meta,
            "findings": self._findings,
            "story_ideas": self._story_ideas,
            "hooks": self._hooks,
            "script_scenes": self._script,
            "script_review": self._review,
            "voice_modifier": self._voice_modifier,
            "voice_merge": self._voice_merge,
            "segments": self._segments,
            "visual_prompt": self._visual_prompt,
        }.get(req.response_schema or "")
        if handler is None:
            return self._plain(req)
        rng = _rng(self.seed, req.response_schema or "", req.user_content)
        return json.dumps(handler(req.user_content, rng), ensure_ascii=False)

    def _plain(self, req: TextRequest) -> str:
        if "reply with the word ok" in req.user_content.lower():
            return "OK"
        rng = _rng(self.seed, "plain", req.system_prompt, req.user_content)
        return f"mock-response-{rng.randrange(1 << 32):08x}"

    # -- handlers ------------------------------------------------------

    def _paper_meta(self, text: str, rng: random.Random) -> dict:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        title = lines[0][:200] if lines else ""
        authors: list[str] = []
        for ln in lines[1:25]:
            if ln.lower().startswith("abstract"):
                break
            chunks = re.split(r",| and | & ", ln)
            candidates = [c.strip() for c in chunks if _looks_like_name(c.strip())]
            if candidates and len(candidates) >= max(1, len([c for c in chunks if c.strip()]) - 1):
                authors.extend(candidates)
        return {"title": title, "authors": authors}

    def _findings(self, text: str, rng: random.Random) -> dict:
        sentences = [s for s in split_sentences(text) if 8 <= word_count(s) <= 30]
        if len(sentences) < 4:
            sentences = sentences + [
                f"The study reports a concrete result about {kw} that matters in practice."
                for kw in (content_words(text, 8) or ["the topic"] * 4)
            ]
        picks = rng.sample(sentences, 4)
        findings = []
        for i, s in enumerate(picks, start=1):
            statement = " ".join(s.split()[:25]).rstrip(",;:")
            if not statement.endswith((".", "!", "?")):
                statement += "."
            findings.append({
                "index": i,
                "statement": statement,
                "grounding": " ".join(s.split()[:8]),
            })
        return {"findings": findings}

    def _story_ideas(self, text: str, rng: random.Random) -> dict:
        payload = _maybe_json(text) or {}
        findings = payload.get("findings") or []
        ideas = []
        for i in range(4):
            tactic = rng.choice(_TACTICS)
            source = findings[i % 4] if findings else {}
            kw = " ".join(content_words(source.get("statement", text), 3)) or "this research"
            ideas.append({
                "tactic": tactic,
                "narrative": _IDEA_TEMPLATES[tactic].format(kw=kw),
                "source_finding": source.get("index", i + 1),
            })
        return {"ideas": ideas}

    def _hooks(self, text: str, rng: random.Random) -> dict:
        payload = _maybe_json(text) or {}
        ideas = payload.get("ideas") or [{} for _ in range(4)]
        hooks = []
        for i, idea in enumerate(ideas[:4]):
            tactic = idea.get("tactic", rng.choice(_TACTICS))
            kw = " ".join(content_words(idea.get("narrative", ""), 3)) or "this research"
            hook_text = _HOOK_TEMPLATES.get(tactic, _HOOK_TEMPLATES["curiosity"]).format(kw=kw)
            if word_count(hook_text) > 15:
                hook_text = " ".join(hook_text.split()[:14]).rstrip("?.,") + "?"
            hooks.append({
                "hook_text": hook_text,
                "tactic": tactic,
                "scores": {
                    "engagement": rng.randint(3, 5),
                    "relevance": rng.randint(3, 5),
                    "emotional_appeal": rng.randint(2, 5),
                },
            })
        while len(hooks) < 4:
            hooks.append(dict(hooks[-1]))
        return {"hooks": hooks}

    def _script(self, text: str, rng: random.Random) -> dict:
        payload = _maybe_json(text) or {}
        hook_text = payload.get("hook_text", "Why does this matter?")
        pool = content_words(payload.get("paper_excerpt", text)) or ["research"]
        openers = {
            1: hook_text.rstrip("?.!").split(),
            2: "Here is the situation most people never stop to think about".split(),
            3: "Researchers dug into the problem to see what is actually happening".split(),
            4: "The key finding changes how we should look at".split(),
            5: "And the numbers back it up in a way that is hard to ignore".split(),
            6: "So what does this actually mean for you in real life".split(),
            7: "It touches the choices you make every single day without noticing".split(),
            8: "So now you know the answer and why it truly matters".split(),
        }
        scenes = []
        for index in range(1, 9):
            n = rng.randint(18, 22)
            toks = list(openers[index])
            pi = rng.randrange(len(pool))
            while len(toks) < n:
                toks.append(pool[pi % len(pool)])
                pi += 1
                if len(toks) < n and rng.random() < 0.25:
                    toks.append(_FILLER[pi % len(_FILLER)])
            toks = toks[:n]
            line = " ".join(toks)
            line = line[0].upper() + line[1:]
            line += "?" if index == 1 else "."
            scenes.append({
                "index": index,
                "text": line,
                "duration_s": round(n / MOCK_WORDS_PER_SECOND, 2),
            })
        return {"scenes": scenes}

    def _review(self, text: str, rng: random.Random) -> dict:
        payload = _maybe_json(text) or {}
        scenes = payload.get("scenes", [])
        return {"scenes": scenes}

    def _voice_modifier(self, text: str, rng: random.Random) -> dict:
        return {"modifier": rng.choice(_MODIFIERS)}

    def _voice_merge(self, text: str, rng: random.Random) -> dict:
        payload = _maybe_json(text) or {}
        modifier = (payload.get("modifier") or "").strip().rstrip(".")
        if not modifier:
            return {"merged": "Speak fast with an influencer vibe."}
        low = modifier.lower()
        if low.startswith("with "):
            merged = f"Speak fast {modifier}."
        else:
            body = re.sub(r"^(more|a bit more|slightly more)\s+", "", modifier, flags=re.I)
            merged = f"Speak fast with a {body} vibe."
        return {"merged": merged}

    def _segments(self, text: str, rng: random.Random) -> dict:
        payload = _maybe_json(text)
        raw = payload.get("script_text", text) if isinstance(payload, dict) else text
        return {"segments": segment_text(raw)}

    def _visual_prompt(self, text: str, rng: random.Random) -> dict:
        payload = _maybe_json(text)
        line = payload.get("segment_text", text) if isinstance(payload, dict) else text
        subject = " ".join(content_words(line, 4)) or "abstract shapes and flowing light"
        mood = rng.choice(_MOODS)
        camera = rng.choice(_CAMERAS)
        prompt = (f"A stylized, cinematic animation of {subject} rendered as an "
                  f"evocative visual metaphor, {mood} atmosphere, {camera}.")
        return {"prompt": prompt}


class MockSpeechProvider(SpeechProvider):
    """Synthesizes per-word tone bursts at a fixed 3.0 words/s pace."""

    sample_rate = 24000

    def __init__(self, seed: int = 42):
        self.seed = seed

    def synthesize(self, style_prompt: str, script_text: str) -> AudioClip:
        if not script_text.strip():
            raise EmptyText("script_text is empty")
        n_words = word_count(script_text)
        total = round(n_words / MOCK_WORDS_PER_SECOND * self.sample_rate)
        rng = _rng(self.seed, "speech", style_prompt, script_text)
        signal = np.zeros(total, dtype=np.float32)
        per_word = total // n_words if n_words else total
        t = np.arange(per_word) / self.sample_rate
        for i, word in enumerate(script_text.split()):
            freq = 180.0 + (hashlib.sha256(word.encode()).digest()[0] % 120) * 4.0
            amp = 0.25 + 0.1 * rng.random()
            env = np.sin(np.pi * np.arange(per_word) / max(1, per_word)) ** 0.5
            start = i * per_word
            signal[start:start + per_word] = amp * env * np.sin(2 * np.pi * freq * t)
        pcm = (signal * 32767).astype("<i2").tobytes()
        return AudioClip(
            media_bytes=pcm_to_wav(pcm, self.sample_rate),
            duration_s=total / self.sample_rate,
            sample_rate=self.sample_rate,
        )


class MockVideoProvider(VideoProvider):
    """Solid-color portrait clips stamped with a prompt hash and frame
    timecodes; content is a pure function of (prompt, duration, variant,
    seed)."""

    def __init__(self, seed: int = 42, width: int = 1080, height: int = 1920,
                 fps: int = 30, jpeg_quality: int = 85,
                 min_clip_s: float = 1.0, max_clip_s: float = 15.0):
        self.seed = seed
        self.width = width
        self.height = height
        self.fps = fps
        self.jpeg_quality = jpeg_quality
        self.min_clip_s = min_clip_s
        self.max_clip_s = max_clip_s

    def generate(self, visual_prompt: str, duration_s: float, variant: int = 0) -> VideoClip:
        if not self.min_clip_s <= duration_s <= self.max_clip_s:
            raise DurationOutOfRange(
                f"requested {duration_s:.2f}s outside "
                f"[{self.min_clip_s}, {self.max_clip_s}]")
        salt = f"{visual_prompt}|seed={self.seed}|v={variant}"
        n_frames = max(1, round(duration_s * self.fps))
        base = frames.render_mock_frame(salt, 0, self.fps, self.width, self.height)
        # timecode strip redrawn per frame; the rest of the frame is static
        strip_top = self.height // 20 + self.height // 18
        strip_h = self.height // 16
        font = load_font(max(24, self.height // 24))
        bg = tuple(int(c) for c in base[strip_top + 2, self.width // 2])
        # stamp whole seconds only, so all frames inside one second encode
        # to the same bytes and the muxer can store them once
        by_second: dict[int, bytes] = {}
        jpegs = []
        for i in range(n_frames):
            second = i // self.fps
            jpeg = by_second.get(second)
            if jpeg is None:
                frame = base.copy()
                strip = Image.new("RGB", (self.width // 2, strip_h), bg)
                draw = ImageDraw.Draw(strip)
                draw.text((0, 0), f"t={second:04d}s", font=font,
                          fill=(255, 255, 255))
                frame[strip_top:strip_top + strip_h, self.width // 20:
                      self.width // 20 + self.width // 2] = np.asarray(strip)
                jpeg = frames.encode_jpeg(frame, self.jpeg_quality)
                by_second[second] = jpeg
            jpegs.append(jpeg)
        blob = write_mp4(jpegs, self.fps, self.width, self.height)
        return VideoClip(media_bytes=blob, duration_s=n_frames / self.fps,
                         width=self.width, height=self.height)
