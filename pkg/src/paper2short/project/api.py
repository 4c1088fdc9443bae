"""REST surface over ProjectService.

Upload a paper, poll the job, pick a hook/script, generate scenes one by
one, merge, download final.mp4. Every error from the service maps to a
JSON body {"error": code, "message": ...} with a stable status code.
"""
from __future__ import annotations

from fastapi import FastAPI, File, Request, UploadFile
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from ..config import AppConfig
from ..errors import (AlreadyRunning, InvalidState, MissingScene, NotAPdf,
                      Paper2ShortError, ProviderUnavailable, UnknownHook,
                      UnknownJob, UnknownProject, UnknownSegment)
from .service import ProjectService

_STATUS_BY_TYPE = [
    (AlreadyRunning, 409),
    (MissingScene, 409),
    (InvalidState, 409),
    ((UnknownProject, UnknownHook, UnknownSegment, UnknownJob), 404),
    (NotAPdf, 400),
    (ProviderUnavailable, 503),
]


def _status_for(exc: Paper2ShortError) -> int:
    for types, status in _STATUS_BY_TYPE:
        if isinstance(exc, types):
            return status
    return 422


class ScriptSelection(BaseModel):
    hook_id: str
    text: str
    voice_modifier: str | None = None


class RegenerateRequest(BaseModel):
    text: str | None = None


class MergeRequest(BaseModel):
    creator_name: str = ""
    attribution_override: str | None = None


class VoicePreviewRequest(BaseModel):
    hook_id: str
    modifier: str


def create_app(service: ProjectService | None = None, root: str = "projects",
               config: AppConfig | None = None) -> FastAPI:
    app = FastAPI(title="paper2short", docs_url=None, redoc_url=None)
    svc = service or ProjectService(root, config=config)
    app.state.service = svc

    @app.exception_handler(Paper2ShortError)
    async def _pipeline_error(request: Request, exc: Paper2ShortError):
        return JSONResponse(status_code=_status_for(exc), content=exc.to_json())

    @app.post("/projects", status_code=202)
    async def create_project(pdf: UploadFile = File(...)):
        blob = await pdf.read()
        project, job = svc.create_project(blob)
        return {"project_id": project.project_id, "job_id": job.job_id}

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        return svc.get_project(project_id).to_dict()

    @app.post("/projects/{project_id}/script", status_code=202)
    def select_script(project_id: str, body: ScriptSelection):
        job = svc.select_script(project_id, body.hook_id, body.text,
                                body.voice_modifier)
        return {"job_id": job.job_id}

    @app.post("/projects/{project_id}/segments/{index}/generate",
              status_code=202)
    def generate_segment(project_id: str, index: int):
        job = svc.request_scene(project_id, index)
        return {"job_id": job.job_id}

    @app.post("/projects/{project_id}/segments/{index}/regenerate",
              status_code=202)
    def regenerate_segment(project_id: str, index: int,
                           body: RegenerateRequest | None = None):
        text = body.text if body is not None else None
        job = svc.request_scene(project_id, index, new_text=text,
                                regenerate=True)
        return {"job_id": job.job_id}

    @app.get("/projects/{project_id}/segments/{index}/clip.mp4")
    def segment_clip(project_id: str, index: int):
        project = svc.get_project(project_id)
        seg = project.segment(index)
        if seg is None:
            raise UnknownSegment(str(index))
        if seg["status"] != "ready":
            raise InvalidState(f"segment {index} is {seg['status']}")
        clip, _ = svc.store.read_scene(project_id, index)
        return Response(content=clip, media_type="video/mp4")

    @app.post("/projects/{project_id}/voice/preview", status_code=202)
    def voice_preview(project_id: str, body: VoicePreviewRequest):
        job = svc.preview_voice(project_id, body.hook_id, body.modifier)
        return {"job_id": job.job_id}

    @app.get("/projects/{project_id}/assets/{digest}")
    def get_asset(project_id: str, digest: str):
        data = svc.store.get_asset(project_id, digest)
        media = "audio/wav" if data[:4] == b"RIFF" else "application/octet-stream"
        return Response(content=data, media_type=media)

    @app.post("/projects/{project_id}/merge", status_code=202)
    def merge(project_id: str, body: MergeRequest):
        job = svc.request_merge(project_id, body.creator_name,
                                body.attribution_override)
        return {"job_id": job.job_id}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        return svc.get_job(job_id).to_dict()

    @app.get("/projects/{project_id}/final.mp4")
    def final_video(project_id: str):
        project = svc.get_project(project_id)
        if project.state != "merged":
            raise InvalidState(f"no final video yet, project is {project.state}")
        path, _ = svc.store.final_paths(project_id)
        return Response(content=path.read_bytes(), media_type="video/mp4")

    @app.get("/projects/{project_id}/final.manifest.json")
    def final_manifest(project_id: str):
        project = svc.get_project(project_id)
        if project.state != "merged":
            raise InvalidState(f"no final video yet, project is {project.state}")
        _, manifest_path = svc.store.final_paths(project_id)
        return Response(content=manifest_path.read_bytes(),
                        media_type="application/json")

    return app
