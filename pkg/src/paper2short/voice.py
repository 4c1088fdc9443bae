"""Voiceover style recommendation and merging.

The baseline directive is fixed; a one-line modifier is recommended from
the script and merged by the provider, with a local fallback template
that guarantees the fast-speech contract no matter what comes back.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .errors import Paper2ShortError, SchemaViolation
from .providers.base import TextRequest
from .script import Script

BASELINE = "an influencer vibe with fast speech"
MAX_PROMPT_CHARS = 200


@dataclass
class VoiceStyle:
    baseline: str
    recommended_modifier: str
    user_modifier: str
    merged_prompt: str


def _prompt(name: str) -> str:
    return resources.files("paper2short").joinpath(f"prompts/voice/{name}.txt").read_text()


def _valid_merge(text: str) -> bool:
    return bool(text.strip()) and "\n" not in text and "fast" in text.lower() \
        and len(text) <= MAX_PROMPT_CHARS


def _fallback_merge(modifier: str) -> str:
    modifier = " ".join(modifier.split())
    if not modifier:
        return "Speak fast with an influencer vibe."
    merged = f"Speak fast {modifier}".rstrip(".") + "."
    return merged[:MAX_PROMPT_CHARS]


def recommend_modifier(gateway, script: Script) -> str:
    data = gateway.complete_text(TextRequest(
        system_prompt=_prompt("recommend_modifier"),
        user_content=script.full_text(),
        response_schema="voice_modifier",
        temperature=0.7,
    ))
    return data["modifier"].strip()


def merge_style(gateway, user_modifier: str) -> str:
    """Provider merge of baseline + modifier; violations of the
    fast-speech / single-line contract fall back to the local template."""
    try:
        data = gateway.complete_text(TextRequest(
            system_prompt=_prompt("merge_style"),
            user_content=json.dumps({"baseline": BASELINE,
                                     "modifier": user_modifier}),
            response_schema="voice_merge",
            temperature=0.3,
        ))
        merged = data["merged"].strip()
    except (SchemaViolation, Paper2ShortError):
        merged = ""
    if not _valid_merge(merged):
        merged = _fallback_merge(user_modifier)
    return merged


def build_voice_style(gateway, script: Script,
                      user_modifier: str | None = None) -> VoiceStyle:
    recommended = recommend_modifier(gateway, script)
    chosen = recommended if user_modifier is None else user_modifier
    return VoiceStyle(
        baseline=BASELINE,
        recommended_modifier=recommended,
        user_modifier=chosen,
        merged_prompt=merge_style(gateway, chosen),
    )
