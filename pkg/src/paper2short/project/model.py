"""Project and job state machines, event-sourced.

A project mutates only by applying events; ``apply_event`` validates
every state change against the legal transition graph, so replaying the
log reconstructs the state exactly or fails loudly.
"""
from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field, asdict

from ..errors import IllegalTransition

STATES = ("created", "hooks_ready", "script_selected", "storyboarding",
          "ready_to_merge", "merging", "merged")

# merged -> merging supports re-merging with edited credit text;
# merging -> ready_to_merge reverts a failed merge job
LEGAL_TRANSITIONS: dict[str, set[str]] = {
    "created": {"hooks_ready"},
    "hooks_ready": {"script_selected"},
    "script_selected": {"storyboarding"},
    "storyboarding": {"ready_to_merge"},
    "ready_to_merge": {"storyboarding", "merging"},
    "merging": {"merged", "ready_to_merge"},
    "merged": {"merging"},
}

JOB_KINDS = ("hooks", "scripts", "voice", "scene", "merge")
JOB_TERMINAL = ("succeeded", "failed")


def new_id(prefix: str) -> str:
    return f"{prefix}_{uuid.uuid4().hex[:12]}"


@dataclass
class Job:
    job_id: str
    kind: str
    status: str = "pending"
    progress: float = 0.0
    error: str | None = None
    result_ref: str | None = None

    def _guard(self):
        if self.status in JOB_TERMINAL:
            raise IllegalTransition(f"job {self.job_id} is terminal ({self.status})")

    def start(self):
        self._guard()
        self.status = "running"

    def set_progress(self, value: float):
        self._guard()
        self.progress = max(self.progress, min(1.0, value))

    def succeed(self, result_ref: str | None = None):
        self._guard()
        self.status = "succeeded"
        self.progress = 1.0
        self.result_ref = result_ref

    def fail(self, error: str):
        self._guard()
        self.status = "failed"
        self.error = error

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Project:
    project_id: str
    state: str = "created"
    created_at: float = 0.0
    updated_at: float = 0.0
    paper: dict | None = None          # title/authors/page_count/warnings
    hooks: list[dict] = field(default_factory=list)
    scripts: dict[str, dict] = field(default_factory=dict)   # hook_id -> script
    voice_recommendations: dict[str, str] = field(default_factory=dict)
    selected_hook: str | None = None
    edited_text: str = ""
    voice: dict | None = None
    segments: list[dict] = field(default_factory=list)
    credit: dict | None = None
    final: dict | None = None          # merge manifest
    merge_version: int = 0

    def segment(self, index: int) -> dict | None:
        for seg in self.segments:
            if seg["index"] == index:
                return seg
        return None

    def all_segments_ready(self) -> bool:
        return bool(self.segments) and all(
            s["status"] == "ready" for s in self.segments)

    def to_dict(self) -> dict:
        return asdict(self)


def make_event(kind: str, data: dict, ts: float | None = None) -> dict:
    return {"ts": ts if ts is not None else time.time(), "event": kind, "data": data}


def _transition(project: Project, target: str):
    if target == project.state:
        return
    if target not in LEGAL_TRANSITIONS.get(project.state, set()):
        raise IllegalTransition(
            f"{project.project_id}: {project.state} -> {target}")
    project.state = target


def apply_event(project: Project, event: dict) -> Project:
    kind = event["event"]
    data = event["data"]
    ts = event["ts"]
    if kind == "project_created":
        project.created_at = ts
    elif kind == "paper_ingested":
        project.paper = data
    elif kind == "hooks_ready":
        project.hooks = data["hooks"]
        project.scripts = data["scripts"]
        project.voice_recommendations = data.get("voice_recommendations", {})
        _transition(project, "hooks_ready")
    elif kind == "script_selected":
        project.selected_hook = data["hook_id"]
        project.edited_text = data["text"]
        project.voice = data["voice"]
        _transition(project, "script_selected")
    elif kind == "segments_planned":
        project.segments = [dict(s, attempts=0) for s in data["segments"]]
        _transition(project, "storyboarding")
    elif kind == "segment_text_edited":
        seg = project.segment(data["index"])
        if seg is not None:
            seg["text"] = data["text"]
            seg["visual_prompt"] = data.get("visual_prompt", seg["visual_prompt"])
            seg["status"] = "pending"
            seg.pop("manifest", None)
            if project.state == "ready_to_merge":
                _transition(project, "storyboarding")
    elif kind == "segment_status":
        seg = project.segment(data["index"])
        if seg is not None:
            seg["status"] = data["status"]
            if data["status"] == "generating":
                seg["attempts"] = seg.get("attempts", 0) + 1
                if project.state == "ready_to_merge":
                    _transition(project, "storyboarding")
            if "manifest" in data:
                seg["manifest"] = data["manifest"]
        if project.all_segments_ready() and project.state == "storyboarding":
            _transition(project, "ready_to_merge")
    elif kind == "merge_started":
        project.credit = data.get("credit")
        _transition(project, "merging")
    elif kind == "merge_failed":
        _transition(project, "ready_to_merge")
    elif kind == "merged":
        project.final = data["manifest"]
        project.merge_version = data["manifest"].get("version", project.merge_version + 1)
        _transition(project, "merged")
    else:
        raise ValueError(f"unknown event kind: {kind}")
    project.updated_at = ts
    return project


def replay(project_id: str, events: list[dict]) -> Project:
    project = Project(project_id=project_id)
    for event in events:
        apply_event(project, event)
    return project
