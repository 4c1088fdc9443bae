"""Command line entry points.

`paper2short run` drives the whole pipeline headlessly with the given
hook index; `paper2short serve` starts the REST server.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import AppConfig
from .errors import Paper2ShortError
from .project.service import ProjectService


def _load_config(path: str | None, providers: str | None) -> AppConfig:
    config = AppConfig.load(path) if path else AppConfig()
    if providers:
        config.providers.text = providers
        config.providers.speech = providers
        config.providers.video = providers
    return config


@click.group()
def main():
    """Turn a research paper PDF into a short vertical video."""


@main.command()
@click.option("--pdf", "pdf_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--hook", "hook_index", required=True, type=click.IntRange(1, 4),
              help="Which of the four candidate hooks to use (1-4).")
@click.option("--providers", default="mock:42", show_default=True,
              help="Provider spec, e.g. mock:42 for the deterministic mock.")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Optional JSON/TOML config file.")
@click.option("--creator", default="", help="Creator name for the credit scene.")
def run(pdf_path: str, hook_index: int, providers: str, out_dir: str,
        config_path: str | None, creator: str):
    """Run the pipeline end to end without the review checkpoints."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = _load_config(config_path, providers)
    service = ProjectService(str(out), config=config)
    try:
        click.echo(f"ingesting {pdf_path} ...")
        project, job = service.create_project(Path(pdf_path).read_bytes())
        service.wait(job)
        if job.status == "failed":
            raise Paper2ShortError(job.error or "hook generation failed")
        project = service.get_project(project.project_id)
        click.echo(f"project {project.project_id}: {len(project.hooks)} hooks ready")
        hook = project.hooks[hook_index - 1]
        click.echo(f"hook {hook_index}: {hook['hook_text']}")
        script = project.scripts[hook["id"]]
        text = "\n".join(s["text"] for s in script["scenes"])
        job = service.select_script(project.project_id, hook["id"], text)
        service.wait(job)
        if job.status == "failed":
            raise Paper2ShortError(job.error or "script selection failed")
        project = service.get_project(project.project_id)
        click.echo(f"storyboard: {len(project.segments)} segments")
        for seg in project.segments:
            job = service.request_scene(project.project_id, seg["index"])
            service.wait(job)
            if job.status == "failed":
                raise Paper2ShortError(job.error or
                                       f"scene {seg['index']} failed")
            click.echo(f"scene {seg['index']}: ready")
        job = service.request_merge(project.project_id, creator)
        service.wait(job)
        if job.status == "failed":
            raise Paper2ShortError(job.error or "merge failed")
        final_path, manifest_path = service.store.final_paths(
            project.project_id)
        (out / "final.mp4").write_bytes(final_path.read_bytes())
        (out / "final.manifest.json").write_bytes(manifest_path.read_bytes())
        manifest = json.loads(manifest_path.read_text())
        click.echo(f"final video: {out / 'final.mp4'} "
                   f"({manifest['duration_s']:.2f}s)")
    except Paper2ShortError as exc:
        click.echo(json.dumps(exc.to_json()), err=True)
        sys.exit(1)
    finally:
        service.close()


@main.command()
@click.option("--root", default="projects", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--providers", default=None,
              help="Provider spec override, e.g. mock:42.")
def serve(root: str, host: str, port: int, config_path: str | None,
          providers: str | None):
    """Start the REST API server."""
    import uvicorn

    from .project.api import create_app

    config = _load_config(config_path, providers)
    app = create_app(root=root, config=config)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
