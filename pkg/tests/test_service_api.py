import json
import time

import pytest
from fastapi.testclient import TestClient

from paper2short.media.mp4 import Mp4File
from paper2short.project.api import create_app
from paper2short.project.service import ProjectService

from conftest import small_config


@pytest.fixture
def service(tmp_path):
    svc = ProjectService(str(tmp_path), config=small_config())
    yield svc
    svc.close()


@pytest.fixture
def client(service):
    return TestClient(create_app(service=service))


def _wait(client, job_id, timeout=120):
    deadline = time.time() + timeout
    while time.time() < deadline:
        job = client.get(f"/jobs/{job_id}").json()
        if job["status"] in ("succeeded", "failed"):
            return job
        time.sleep(0.05)
    raise AssertionError("job did not finish")


def _upload(client, sample_pdf):
    r = client.post("/projects",
                    files={"pdf": ("paper.pdf", sample_pdf, "application/pdf")})
    assert r.status_code == 202
    body = r.json()
    job = _wait(client, body["job_id"])
    assert job["status"] == "succeeded", job["error"]
    return body["project_id"]


def test_full_flow_over_rest(client, sample_pdf):
    project_id = _upload(client, sample_pdf)

    # Step 1: four hooks, each with a draft script and a voice recommendation
    p = client.get(f"/projects/{project_id}").json()
    assert p["state"] == "hooks_ready"
    assert len(p["hooks"]) == 4
    assert set(p["scripts"]) == {h["id"] for h in p["hooks"]}
    hook = p["hooks"][1]
    script_text = "\n".join(s["text"]
                            for s in p["scripts"][hook["id"]]["scenes"])

    # Step 2: select with a custom voice modifier
    r = client.post(f"/projects/{project_id}/script",
                    json={"hook_id": hook["id"], "text": script_text,
                          "voice_modifier": "with a calm tone"})
    assert r.status_code == 202
    assert _wait(client, r.json()["job_id"])["status"] == "succeeded"
    p = client.get(f"/projects/{project_id}").json()
    assert p["state"] == "storyboarding"
    assert len(p["segments"]) == 8
    assert p["voice"]["user_modifier"] == "with a calm tone"
    assert "fast" in p["voice"]["merged_prompt"].lower()

    # Step 3: generate every segment, regenerate one, then merge
    for seg in p["segments"]:
        r = client.post(
            f"/projects/{project_id}/segments/{seg['index']}/generate")
        assert r.status_code == 202
        assert _wait(client, r.json()["job_id"])["status"] == "succeeded"
    r = client.post(f"/projects/{project_id}/segments/3/regenerate", json={})
    assert _wait(client, r.json()["job_id"])["status"] == "succeeded"
    p = client.get(f"/projects/{project_id}").json()
    assert p["state"] == "ready_to_merge"
    assert p["segments"][2]["manifest"]["provider_ids"]["variant"] == 1

    clip = client.get(f"/projects/{project_id}/segments/1/clip.mp4")
    assert clip.status_code == 200
    assert Mp4File(clip.content).video_track() is not None

    r = client.post(f"/projects/{project_id}/merge",
                    json={"creator_name": "Casey"})
    assert _wait(client, r.json()["job_id"])["status"] == "succeeded"
    p = client.get(f"/projects/{project_id}").json()
    assert p["state"] == "merged"
    assert "Casey" in p["final"]["credit"]["attribution_text"]

    final = client.get(f"/projects/{project_id}/final.mp4")
    assert final.status_code == 200
    parsed = Mp4File(final.content)
    total = sum(s["manifest"]["video_duration_s"] for s in p["segments"])
    assert parsed.video_track().duration_s == pytest.approx(total + 2.0, abs=0.1)

    manifest = json.loads(
        client.get(f"/projects/{project_id}/final.manifest.json").content)
    assert manifest == p["final"]


def test_error_mapping(client, service, sample_pdf):
    assert client.get("/projects/nope").status_code == 404
    assert client.get("/jobs/nope").status_code == 404

    r = client.post("/projects",
                    files={"pdf": ("x.pdf", b"not a pdf", "application/pdf")})
    job = _wait(client, r.json()["job_id"])
    assert job["status"] == "failed"
    assert "not_a_pdf" in job["error"]

    project_id = _upload(client, sample_pdf)
    # wrong state for merge
    assert client.post(f"/projects/{project_id}/merge",
                       json={"creator_name": ""}).status_code == 409
    # unknown hook
    assert client.post(f"/projects/{project_id}/script",
                       json={"hook_id": "hook_99", "text": "t"}).status_code == 404
    # premature final download
    assert client.get(f"/projects/{project_id}/final.mp4").status_code == 409


def test_conflict_on_double_generate(client, service, sample_pdf):
    project_id = _upload(client, sample_pdf)
    p = client.get(f"/projects/{project_id}").json()
    hook = p["hooks"][0]
    text = "\n".join(s["text"] for s in p["scripts"][hook["id"]]["scenes"])
    r = client.post(f"/projects/{project_id}/script",
                    json={"hook_id": hook["id"], "text": text})
    _wait(client, r.json()["job_id"])
    first = client.post(f"/projects/{project_id}/segments/1/generate")
    second = client.post(f"/projects/{project_id}/segments/1/generate")
    codes = {first.status_code, second.status_code}
    assert 202 in codes
    if first.status_code == 202:
        assert second.status_code in (202, 409)
    _wait(client, first.json()["job_id"] if first.status_code == 202
          else second.json()["job_id"])


def test_voice_preview_and_asset(client, sample_pdf):
    project_id = _upload(client, sample_pdf)
    p = client.get(f"/projects/{project_id}").json()
    r = client.post(f"/projects/{project_id}/voice/preview",
                    json={"hook_id": p["hooks"][0]["id"],
                          "modifier": "with a calm tone"})
    job = _wait(client, r.json()["job_id"])
    assert job["status"] == "succeeded"
    wav = client.get(f"/projects/{project_id}/{job['result_ref']}")
    assert wav.status_code == 200
    assert wav.content[:4] == b"RIFF"


def test_regenerate_with_new_text_resynthesizes(client, service, sample_pdf):
    project_id = _upload(client, sample_pdf)
    p = client.get(f"/projects/{project_id}").json()
    hook = p["hooks"][0]
    text = "\n".join(s["text"] for s in p["scripts"][hook["id"]]["scenes"])
    r = client.post(f"/projects/{project_id}/script",
                    json={"hook_id": hook["id"], "text": text})
    _wait(client, r.json()["job_id"])
    r = client.post(f"/projects/{project_id}/segments/2/generate")
    _wait(client, r.json()["job_id"])
    old = client.get(f"/projects/{project_id}").json()["segments"][1]
    r = client.post(f"/projects/{project_id}/segments/2/regenerate",
                    json={"text": "A completely different narration beat."})
    job = _wait(client, r.json()["job_id"])
    assert job["status"] == "succeeded"
    new = client.get(f"/projects/{project_id}").json()["segments"][1]
    assert new["text"] == "A completely different narration beat."
    assert new["manifest"]["audio_duration_s"] != \
        old["manifest"]["audio_duration_s"]


def test_service_survives_restart(tmp_path, sample_pdf):
    config = small_config()
    svc = ProjectService(str(tmp_path), config=config)
    project, job = svc.create_project(sample_pdf)
    svc.wait(job)
    state = svc.get_project(project.project_id).to_dict()
    svc.close()

    revived = ProjectService(str(tmp_path), config=config)
    try:
        again = revived.get_project(project.project_id).to_dict()
        assert again == state
    finally:
        revived.close()
