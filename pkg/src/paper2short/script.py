"""Eight-scene script generation, language lint, self review, pacing."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, asdict
from importlib import resources

from .config import WORDS_PER_SECOND
from .errors import SchemaViolation
from .hooks import HookCandidate
from .providers.base import TextRequest
from .textutil import split_sentences, word_count

SCENE_COUNT = 8
SCENE_WORD_MIN, SCENE_WORD_MAX = 18, 22

# fixed generation-time role mapping
ROLE_BY_INDEX = {1: "hook", 2: "context", 3: "context", 4: "findings",
                 5: "findings", 6: "relevance", 7: "relevance", 8: "closing"}

# total-duration warning band, wider than the raw 8x(18..22)/3 range
# because hooks often run short and users edit freely
TOTAL_BAND_S = (36.0, 56.0)

_HEDGES = {
    "the findings suggest": "This means",
    "the results indicate": "This shows",
    "it can be concluded that": "So",
    "we demonstrate that": "We show",
}


@dataclass
class Scene:
    index: int
    role: str
    text: str
    word_count: int = 0
    est_duration_s: float = 0.0

    def __post_init__(self):
        self.word_count = word_count(self.text)
        self.est_duration_s = estimate_duration(self.word_count)


@dataclass
class Script:
    hook_ref: str
    scenes: list[Scene]
    total_est_duration_s: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.total_est_duration_s = sum(s.est_duration_s for s in self.scenes)

    def full_text(self) -> str:
        return "\n".join(s.text for s in self.scenes)

    def to_dict(self) -> dict:
        return {"hook_ref": self.hook_ref,
                "scenes": [asdict(s) for s in self.scenes],
                "total_est_duration_s": self.total_est_duration_s,
                "warnings": self.warnings}


def estimate_duration(n_words: int) -> float:
    """Seconds of voiceover for n words at the fixed 3.0 words/s pace."""
    if n_words < 0:
        raise ValueError("word count must be non-negative")
    return n_words / WORDS_PER_SECOND


def _prompt(name: str) -> str:
    return resources.files("paper2short").joinpath(f"prompts/script/{name}.txt").read_text()


def _scenes_from_payload(raw_scenes: list[dict]) -> list[Scene]:
    """Rebuild scenes with contiguous indices and locally recomputed
    word counts/durations; provider-reported durations are ignored."""
    ordered = sorted(raw_scenes, key=lambda s: s["index"])
    return [Scene(index=i, role=ROLE_BY_INDEX.get(i, "findings"), text=s["text"].strip())
            for i, s in enumerate(ordered, start=1)]


def _band_warnings(script: Script) -> list[str]:
    warnings = []
    for scene in script.scenes:
        if not SCENE_WORD_MIN <= scene.word_count <= SCENE_WORD_MAX:
            warnings.append(
                f"scene {scene.index}: {scene.word_count} words outside "
                f"{SCENE_WORD_MIN}-{SCENE_WORD_MAX}")
    lo, hi = TOTAL_BAND_S
    if not lo <= script.total_est_duration_s <= hi:
        warnings.append(
            f"total estimated duration {script.total_est_duration_s:.1f}s "
            f"outside {lo:.0f}-{hi:.0f}s")
    return warnings


def generate_script(gateway, hook: HookCandidate, paper_text: str,
                    hook_ref: str = "") -> Script:
    payload = {
        "hook_text": hook.hook_text,
        "tactic": hook.tactic,
        "paper_excerpt": paper_text[:20_000],
    }
    data = gateway.complete_text(TextRequest(
        system_prompt=_prompt("generate_script"),
        user_content=json.dumps(payload, ensure_ascii=False),
        response_schema="script_scenes",
        temperature=0.8,
    ))
    script = Script(hook_ref=hook_ref or hook.hook_text,
                    scenes=_scenes_from_payload(data["scenes"]))
    script.warnings = _band_warnings(script)
    return script


def self_review(gateway, script: Script) -> Script:
    """One provider review pass; keeps the original on any structural
    regression (scene count change, empty text)."""
    payload = {"scenes": [{"index": s.index, "text": s.text} for s in script.scenes]}
    try:
        data = gateway.complete_text(TextRequest(
            system_prompt=_prompt("self_review"),
            user_content=json.dumps(payload, ensure_ascii=False),
            response_schema="script_review",
            temperature=0.4,
        ))
    except SchemaViolation:
        revised = None
    else:
        revised = data.get("scenes")
    if not revised or len(revised) != len(script.scenes) or \
            any(not s.get("text", "").strip() for s in revised):
        kept = Script(hook_ref=script.hook_ref, scenes=script.scenes)
        kept.warnings = script.warnings + ["self-review output rejected; kept original"]
        return kept
    reviewed = Script(hook_ref=script.hook_ref, scenes=_scenes_from_payload(revised))
    reviewed.warnings = _band_warnings(reviewed)
    return reviewed


def _load_jargon(jargon_file: str | None = None) -> dict[str, str]:
    if jargon_file:
        return json.loads(open(jargon_file).read())
    ref = resources.files("paper2short").joinpath("data/jargon.json")
    return json.loads(ref.read_text())


def lint_language(script: Script, jargon_file: str | None = None) -> list[str]:
    """Deterministic advisories: overlong sentences, jargon-list hits,
    academic hedges with suggested rewrites."""
    jargon = _load_jargon(jargon_file)
    advisories = []
    for scene in script.scenes:
        low = scene.text.lower()
        for sentence in split_sentences(scene.text):
            if word_count(sentence) > 30:
                advisories.append(
                    f"scene {scene.index}: sentence over 30 words; split it up")
        for hedge, rewrite in _HEDGES.items():
            if hedge in low:
                advisories.append(
                    f"scene {scene.index}: academic hedge '{hedge}'; "
                    f"try '{rewrite}...'")
        for term, concrete in jargon.items():
            if re.search(r"\b%s\b" % re.escape(term), low):
                advisories.append(
                    f"scene {scene.index}: jargon '{term}'; use a concrete "
                    f"substitute like '{concrete}'")
    return advisories
