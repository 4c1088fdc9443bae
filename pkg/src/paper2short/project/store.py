"""On-disk project store: append-only event log plus asset files.

Layout per project:
    projects/<id>/events.jsonl
    projects/<id>/paper/{paper.json, page1.png, body.txt}
    projects/<id>/scene_{i}.mp4, scene_{i}.json
    projects/<id>/final.mp4, final.manifest.json
    projects/<id>/assets/<sha256>     (content-addressed blobs)
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path

from .model import Project, make_event, apply_event, replay


class ProjectStore:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        (self.root / "projects").mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def project_dir(self, project_id: str) -> Path:
        return self.root / "projects" / project_id

    def events_path(self, project_id: str) -> Path:
        return self.project_dir(project_id) / "events.jsonl"

    def create(self, project_id: str):
        d = self.project_dir(project_id)
        d.mkdir(parents=True, exist_ok=False)
        (d / "assets").mkdir()

    def append_event(self, project_id: str, kind: str, data: dict) -> dict:
        event = make_event(kind, data)
        line = json.dumps(event, ensure_ascii=False)
        with self._lock:
            with open(self.events_path(project_id), "a") as fh:
                fh.write(line + "\n")
        return event

    def read_events(self, project_id: str) -> list[dict]:
        path = self.events_path(project_id)
        if not path.exists():
            return []
        with open(path) as fh:
            return [json.loads(line) for line in fh if line.strip()]

    def load(self, project_id: str) -> Project:
        return replay(project_id, self.read_events(project_id))

    def list_projects(self) -> list[str]:
        return sorted(p.name for p in (self.root / "projects").iterdir()
                      if p.is_dir())

    # -- assets --------------------------------------------------------

    def put_asset(self, project_id: str, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        path = self.project_dir(project_id) / "assets" / digest
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(data)
            tmp.replace(path)
        return digest

    def get_asset(self, project_id: str, digest: str) -> bytes:
        return (self.project_dir(project_id) / "assets" / digest).read_bytes()

    def write_scene(self, project_id: str, index: int, clip: bytes, manifest: dict):
        d = self.project_dir(project_id)
        (d / f"scene_{index}.mp4").write_bytes(clip)
        (d / f"scene_{index}.json").write_text(
            json.dumps(manifest, indent=2, ensure_ascii=False, sort_keys=True) + "\n")

    def read_scene(self, project_id: str, index: int) -> tuple[bytes, dict]:
        d = self.project_dir(project_id)
        return ((d / f"scene_{index}.mp4").read_bytes(),
                json.loads((d / f"scene_{index}.json").read_text()))

    def write_final(self, project_id: str, blob: bytes, manifest: dict):
        d = self.project_dir(project_id)
        (d / "final.mp4").write_bytes(blob)
        (d / "final.manifest.json").write_text(
            json.dumps(manifest, indent=2, ensure_ascii=False, sort_keys=True) + "\n")

    def final_paths(self, project_id: str) -> tuple[Path, Path]:
        d = self.project_dir(project_id)
        return d / "final.mp4", d / "final.manifest.json"
