"""Hook pipeline: findings -> story ideas -> crafted, validated hooks."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import ValidationExhausted
from .providers.base import TextRequest
from .textutil import has_citation_marker, word_count

MAX_HOOK_WORDS = 15
TACTICS = ("contradiction", "surprise_irony", "personal_stakes", "curiosity")

# definitive causal phrasing that should usually be a question instead
_CAUSAL = re.compile(r"\b(causes?|leads? to|makes?|proves?|will)\b", re.I)
_DISALLOWED_CHARS = re.compile(r"[{}<>|\\\[\]]")


@dataclass
class Finding:
    index: int
    statement: str
    grounding: str = ""


@dataclass
class StoryIdea:
    tactic: str
    narrative: str
    source_finding: int


@dataclass
class HookCandidate:
    hook_text: str
    tactic: str
    scores: dict[str, float]
    word_count: int = 0
    lint: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.word_count = word_count(self.hook_text)


def _prompt(name: str) -> str:
    return resources.files("paper2short").joinpath(f"prompts/hook/{name}.txt").read_text()


def extract_core_findings(gateway, paper_text: str) -> list[Finding]:
    if not paper_text.strip():
        raise ValueError("paper_text must be non-empty")
    data = gateway.complete_text(TextRequest(
        system_prompt=_prompt("extract_findings"),
        user_content=paper_text,
        response_schema="findings",
        temperature=0.6,
    ))
    return [Finding(index=f["index"], statement=f["statement"],
                    grounding=f.get("grounding", ""))
            for f in data["findings"]]


def brainstorm_stories(gateway, findings: list[Finding]) -> list[StoryIdea]:
    if len(findings) != 4:
        raise ValueError("exactly four findings required")
    payload = {"findings": [vars(f) for f in findings]}
    data = gateway.complete_text(TextRequest(
        system_prompt=_prompt("brainstorm_stories"),
        user_content=json.dumps(payload, ensure_ascii=False),
        response_schema="story_ideas",
        temperature=0.9,
    ))
    return [StoryIdea(tactic=i["tactic"], narrative=i["narrative"],
                      source_finding=i.get("source_finding", n + 1))
            for n, i in enumerate(data["ideas"])]


def validate_hook(hook: HookCandidate) -> list[str]:
    """Deterministic, provider-free checks. Empty list means ok."""
    violations = []
    if not hook.hook_text.strip():
        violations.append("empty hook")
    if hook.word_count > MAX_HOOK_WORDS:
        violations.append(f"word_count>{MAX_HOOK_WORDS}")
    if has_citation_marker(hook.hook_text):
        violations.append("citation marker")
    if _DISALLOWED_CHARS.search(hook.hook_text):
        violations.append("disallowed characters")
    if hook.tactic not in TACTICS:
        violations.append(f"unknown tactic '{hook.tactic}'")
    for name, value in hook.scores.items():
        if not 1 <= value <= 5:
            violations.append(f"score {name} out of [1,5]")
    return violations


def lint_hook(hook: HookCandidate) -> list[str]:
    """Soft advisories surfaced to the user, never blocking."""
    lint = []
    if _CAUSAL.search(hook.hook_text) and not hook.hook_text.rstrip().endswith("?"):
        lint.append("declarative causal claim; consider phrasing as a question")
    return lint


def craft_and_curate_hooks(gateway, ideas: list[StoryIdea],
                           max_rerequests: int = 3) -> list[HookCandidate]:
    """Draft, rate and locally validate four hooks.

    Hooks that fail the deterministic validator are re-requested (whole
    batch, with the violations quoted back); after max_rerequests
    failures ValidationExhausted is raised.
    """
    if len(ideas) != 4:
        raise ValueError("exactly four story ideas required")
    payload = json.dumps({"ideas": [vars(i) for i in ideas]}, ensure_ascii=False)
    content = payload
    last_violations: list[str] = []
    for _ in range(max_rerequests + 1):
        data = gateway.complete_text(TextRequest(
            system_prompt=_prompt("craft_hooks"),
            user_content=content,
            response_schema="hooks",
            temperature=0.8,
        ))
        hooks = [HookCandidate(hook_text=h["hook_text"].strip(),
                               tactic=h["tactic"], scores=dict(h["scores"]))
                 for h in data["hooks"]]
        last_violations = [v for h in hooks for v in validate_hook(h)]
        if not last_violations:
            for h in hooks:
                h.lint = lint_hook(h)
            return hooks
        content = (payload + "\n\nThe previous hooks were rejected: "
                   + "; ".join(last_violations)
                   + ". Fix them and return four valid hooks.")
    raise ValidationExhausted(
        f"hooks still invalid after {max_rerequests} re-requests: "
        + "; ".join(last_violations))


def run_hook_pipeline(gateway, paper_text: str) -> list[HookCandidate]:
    findings = extract_core_findings(gateway, paper_text)
    ideas = brainstorm_stories(gateway, findings)
    return craft_and_curate_hooks(gateway, ideas)
