"""Command layer: drives the pipeline, tracks jobs, owns all mutation.

Every project is mutated only while holding its per-project lock, by
appending an event and applying it to the in-memory copy; jobs run on a
worker pool and publish results back the same way.
"""
from __future__ import annotations

import hashlib
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..assembly import build_credit_scene, merge_video
from ..config import AppConfig
from ..errors import (AlreadyRunning, InvalidState, MissingScene, Paper2ShortError,
                      UnknownHook, UnknownJob, UnknownProject, UnknownSegment)
from ..hooks import run_hook_pipeline
from ..ingest import SourcePaper, ingest_pdf, load_source_paper, save_source_paper
from ..providers.gateway import ProviderGateway
from ..script import Script, generate_script, self_review
from ..hooks import HookCandidate
from ..storyboard import SceneAsset, Segment, generate_scene, generate_visual_prompt, resegment
from ..voice import VoiceStyle, build_voice_style, merge_style
from .model import Job, Project, new_id
from .store import ProjectStore


@dataclass
class _AudioCacheEntry:
    wav: bytes
    duration_s: float
    sample_rate: int


class ProjectService:
    def __init__(self, root: str, config: AppConfig | None = None,
                 gateway: ProviderGateway | None = None):
        self.config = config or AppConfig()
        self.gateway = gateway or ProviderGateway(self.config)
        self.store = ProjectStore(root)
        self.jobs: dict[str, Job] = {}
        self._projects: dict[str, Project] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._guard = threading.Lock()
        self._pool = ThreadPoolExecutor(
            max_workers=max(2, self.config.scene_concurrency + 2),
            thread_name_prefix="job")
        self._audio_cache: dict[str, _AudioCacheEntry] = {}
        for project_id in self.store.list_projects():
            self._projects[project_id] = self.store.load(project_id)

    # -- helpers -------------------------------------------------------

    def _lock_for(self, project_id: str) -> threading.RLock:
        with self._guard:
            return self._locks.setdefault(project_id, threading.RLock())

    def get_project(self, project_id: str) -> Project:
        project = self._projects.get(project_id)
        if project is None:
            raise UnknownProject(project_id)
        return project

    def get_job(self, job_id: str) -> Job:
        job = self.jobs.get(job_id)
        if job is None:
            raise UnknownJob(job_id)
        return job

    def _emit(self, project_id: str, kind: str, data: dict):
        with self._lock_for(project_id):
            event = self.store.append_event(project_id, kind, data)
            from .model import apply_event
            apply_event(self.get_project(project_id), event)

    def _spawn(self, kind: str, fn, *args) -> Job:
        job = Job(job_id=new_id("job"), kind=kind)
        self.jobs[job.job_id] = job

        def runner():
            job.start()
            try:
                result_ref = fn(job, *args)
                job.succeed(result_ref)
            except Paper2ShortError as exc:
                job.fail(f"{exc.code}: {exc}")
            except Exception as exc:  # noqa: BLE001 - job boundary
                job.fail(f"internal: {exc}")

        self._pool.submit(runner)
        return job

    def _audio_key(self, merged_prompt: str, text: str) -> str:
        return hashlib.sha256(f"{merged_prompt}\x00{text}".encode()).hexdigest()

    # -- commands ------------------------------------------------------

    def create_project(self, pdf_bytes: bytes) -> tuple[Project, Job]:
        project_id = new_id("proj")
        self.store.create(project_id)
        project = Project(project_id=project_id)
        self._projects[project_id] = project
        self._emit(project_id, "project_created", {"project_id": project_id})
        job = self._spawn("hooks", self._run_hooks_job, project_id, pdf_bytes)
        return project, job

    def _run_hooks_job(self, job: Job, project_id: str, pdf_bytes: bytes) -> str:
        paper = ingest_pdf(pdf_bytes, gateway=self.gateway, config=self.config,
                           paper_id=project_id)
        save_source_paper(paper, self.store.project_dir(project_id) / "paper")
        self._emit(project_id, "paper_ingested", {
            "title": paper.title, "authors": paper.authors,
            "page_count": paper.page_count, "warnings": paper.ingest_warnings,
        })
        job.set_progress(0.2)
        hooks = run_hook_pipeline(self.gateway, paper.body_text)
        job.set_progress(0.4)
        hook_records, scripts, recommendations = [], {}, {}
        for i, hook in enumerate(hooks, start=1):
            hook_id = f"hook_{i}"
            hook_records.append({
                "id": hook_id, "hook_text": hook.hook_text, "tactic": hook.tactic,
                "scores": hook.scores, "word_count": hook.word_count,
                "lint": hook.lint,
            })
            script = generate_script(self.gateway, hook, paper.body_text,
                                     hook_ref=hook_id)
            script = self_review(self.gateway, script)
            scripts[hook_id] = script.to_dict()
            from ..voice import recommend_modifier
            recommendations[hook_id] = recommend_modifier(self.gateway, script)
            job.set_progress(0.4 + 0.15 * i)
        self._emit(project_id, "hooks_ready", {
            "hooks": hook_records, "scripts": scripts,
            "voice_recommendations": recommendations,
        })
        return project_id

    def select_script(self, project_id: str, hook_id: str, edited_text: str,
                      voice_modifier: str | None = None) -> Job:
        project = self.get_project(project_id)
        with self._lock_for(project_id):
            if project.state != "hooks_ready":
                raise InvalidState(
                    f"select_script requires hooks_ready, project is {project.state}")
            if hook_id not in project.scripts:
                raise UnknownHook(hook_id)
        if not edited_text.strip():
            raise InvalidState("script text must be non-empty")
        return self._spawn("scripts", self._run_select_job, project_id,
                           hook_id, edited_text, voice_modifier)

    def _run_select_job(self, job: Job, project_id: str, hook_id: str,
                        edited_text: str, voice_modifier: str | None) -> str:
        project = self.get_project(project_id)
        recommended = project.voice_recommendations.get(hook_id, "")
        chosen = recommended if voice_modifier is None else voice_modifier
        merged = merge_style(self.gateway, chosen)
        voice = {"baseline": "an influencer vibe with fast speech",
                 "recommended_modifier": recommended,
                 "user_modifier": chosen, "merged_prompt": merged}
        self._emit(project_id, "script_selected", {
            "hook_id": hook_id, "text": edited_text, "voice": voice})
        job.set_progress(0.3)
        segments = resegment(self.gateway, edited_text)
        planned = []
        for n, segment in enumerate(segments):
            segment.visual_prompt = generate_visual_prompt(self.gateway, segment)
            planned.append({"index": segment.index, "text": segment.text,
                            "visual_prompt": segment.visual_prompt,
                            "status": "pending"})
            job.set_progress(0.3 + 0.7 * (n + 1) / len(segments))
        self._emit(project_id, "segments_planned", {"segments": planned})
        return project_id

    def request_scene(self, project_id: str, index: int,
                      new_text: str | None = None,
                      regenerate: bool = False) -> Job:
        project = self.get_project(project_id)
        with self._lock_for(project_id):
            if project.state not in ("storyboarding", "ready_to_merge"):
                raise InvalidState(
                    f"scene generation requires storyboarding, project is "
                    f"{project.state}")
            seg = project.segment(index)
            if seg is None:
                raise UnknownSegment(str(index))
            if seg["status"] == "generating":
                raise AlreadyRunning(f"segment {index} already generating")
            if new_text is not None and new_text.strip() and \
                    new_text.strip() != seg["text"]:
                prompt = generate_visual_prompt(
                    self.gateway, Segment(index=index, text=new_text.strip()))
                self._emit(project_id, "segment_text_edited", {
                    "index": index, "text": new_text.strip(),
                    "visual_prompt": prompt})
            variant = seg.get("attempts", 0) if regenerate else 0
            self._emit(project_id, "segment_status",
                       {"index": index, "status": "generating"})
        return self._spawn("scene", self._run_scene_job, project_id, index, variant)

    def _run_scene_job(self, job: Job, project_id: str, index: int,
                       variant: int) -> str:
        project = self.get_project(project_id)
        seg = project.segment(index)
        segment = Segment(index=index, text=seg["text"],
                          visual_prompt=seg["visual_prompt"])
        voice = project.voice or {}
        style = VoiceStyle(baseline=voice.get("baseline", ""),
                           recommended_modifier=voice.get("recommended_modifier", ""),
                           user_modifier=voice.get("user_modifier", ""),
                           merged_prompt=voice.get("merged_prompt", "Speak fast."))
        key = self._audio_key(style.merged_prompt, segment.text)
        cached = self._audio_cache.get(key)
        cached_audio = None
        if cached is not None:
            from ..providers.base import AudioClip
            cached_audio = AudioClip(media_bytes=cached.wav,
                                     duration_s=cached.duration_s,
                                     sample_rate=cached.sample_rate)
        try:
            asset = generate_scene(self.gateway, segment, style,
                                   config=self.config, variant=variant,
                                   cached_audio=cached_audio)
        except Paper2ShortError:
            self._emit(project_id, "segment_status",
                       {"index": index, "status": "failed"})
            raise
        self._audio_cache[key] = _AudioCacheEntry(
            wav=asset.voiceover.media_bytes,
            duration_s=asset.voiceover.duration_s,
            sample_rate=asset.voiceover.sample_rate)
        self.store.write_scene(project_id, index, asset.final_clip, asset.manifest)
        self._emit(project_id, "segment_status", {
            "index": index, "status": "ready", "manifest": asset.manifest})
        return f"scene_{index}.mp4"

    def preview_voice(self, project_id: str, hook_id: str,
                      modifier: str) -> Job:
        project = self.get_project(project_id)
        script = project.scripts.get(hook_id)
        if script is None:
            raise UnknownHook(hook_id)
        first_line = script["scenes"][0]["text"]
        return self._spawn("voice", self._run_voice_job, project_id,
                           first_line, modifier)

    def _run_voice_job(self, job: Job, project_id: str, text: str,
                       modifier: str) -> str:
        merged = merge_style(self.gateway, modifier)
        clip = self.gateway.synthesize_speech(merged, text)
        digest = self.store.put_asset(project_id, clip.media_bytes)
        return f"assets/{digest}"

    def request_merge(self, project_id: str, creator_name: str,
                      attribution_override: str | None = None) -> Job:
        project = self.get_project(project_id)
        with self._lock_for(project_id):
            if project.state not in ("ready_to_merge", "merged"):
                raise InvalidState(
                    f"merge requires ready_to_merge, project is {project.state}")
            missing = [s["index"] for s in project.segments
                       if s["status"] != "ready"]
            if missing or not project.segments:
                raise MissingScene(missing or [0])
            self._emit(project_id, "merge_started", {"credit": {
                "creator_name": creator_name,
                "attribution_override": attribution_override}})
        return self._spawn("merge", self._run_merge_job, project_id,
                           creator_name, attribution_override)

    def _run_merge_job(self, job: Job, project_id: str, creator_name: str,
                       attribution_override: str | None) -> str:
        project = self.get_project(project_id)
        try:
            paper = load_source_paper(self.store.project_dir(project_id) / "paper")
            credit = build_credit_scene(paper, creator_name,
                                        override_text=attribution_override,
                                        config=self.config)
            job.set_progress(0.3)
            assets = []
            for seg in sorted(project.segments, key=lambda s: s["index"]):
                clip, manifest = self.store.read_scene(project_id, seg["index"])
                assets.append(SceneAsset(
                    segment_index=seg["index"], voiceover=None, raw_video=None,
                    final_clip=clip,
                    audio_duration_s=manifest["audio_duration_s"],
                    video_duration_s=manifest["video_duration_s"],
                    manifest=manifest))
            final = merge_video(assets, credit, config=self.config,
                                manifest_version=project.merge_version + 1)
            job.set_progress(0.9)
            self.store.write_final(project_id, final.media_bytes, final.manifest)
        except Paper2ShortError:
            self._emit(project_id, "merge_failed", {})
            raise
        self._emit(project_id, "merged", {"manifest": final.manifest})
        return "final.mp4"

    # -- sync helpers (CLI / tests) -----------------------------------

    def wait(self, job: Job, timeout_s: float = 300.0) -> Job:
        import time
        deadline = time.time() + timeout_s
        while job.status not in ("succeeded", "failed"):
            if time.time() > deadline:
                raise TimeoutError(f"job {job.job_id} did not finish")
            time.sleep(0.02)
        return job

    def close(self):
        self._pool.shutdown(wait=True)
        self.gateway.close()
