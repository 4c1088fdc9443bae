"""Acceptance checks, one test per shipped guarantee.

Each test prints a single PASS line with the measured numbers; a failed
assertion is the corresponding FAIL.
"""
import hashlib
import json
import random
import string
import time
from fractions import Fraction

import pytest
from click.testing import CliRunner

from paper2short.assembly import default_attribution
from paper2short.cli import main as cli_main
from paper2short.errors import IllegalTransition
from paper2short.hooks import MAX_HOOK_WORDS, run_hook_pipeline, validate_hook
from paper2short.media.mp4 import Mp4File
from paper2short.project.model import (LEGAL_TRANSITIONS, Job, Project, STATES,
                                       apply_event, make_event)
from paper2short.project.service import ProjectService
from paper2short.script import ROLE_BY_INDEX, estimate_duration, generate_script
from paper2short.segmenting import segment_text
from paper2short.textutil import normalize_ws

from conftest import SAMPLE_LINES, build_pdf, small_config

PAPER_TEXT = " ".join(line for line in SAMPLE_LINES if line)


def _run_project(tmp_path, seed):
    """Full mock pipeline for one fixture project; returns (service, project)."""
    svc = ProjectService(str(tmp_path / f"proj_{seed}"), config=small_config(seed))
    project, job = svc.create_project(build_pdf(SAMPLE_LINES))
    svc.wait(job)
    assert job.status == "succeeded", job.error
    project = svc.get_project(project.project_id)
    hook = project.hooks[0]
    text = "\n".join(s["text"] for s in project.scripts[hook["id"]]["scenes"])
    svc.wait(svc.select_script(project.project_id, hook["id"], text))
    project = svc.get_project(project.project_id)
    for seg in project.segments:
        job = svc.request_scene(project.project_id, seg["index"])
        svc.wait(job)
        assert job.status == "succeeded", job.error
    return svc, svc.get_project(project.project_id)


@pytest.fixture(scope="module")
def fixture_projects(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("fixtures")
    out = [_run_project(tmp, seed) for seed in (42, 7, 13)]
    yield out
    for svc, _ in out:
        svc.close()


def test_structural_script_contract():
    started = time.monotonic()
    checked = 0
    for seed in range(1, 51):
        from paper2short.providers.gateway import ProviderGateway
        gw = ProviderGateway(small_config(seed))
        hooks = run_hook_pipeline(gw, PAPER_TEXT)
        for hook in hooks:
            script = generate_script(gw, hook, PAPER_TEXT)
            assert len(script.scenes) == 8
            for scene in script.scenes:
                assert scene.role == ROLE_BY_INDEX[scene.index]
            checked += 1
        gw.close()
    elapsed = time.monotonic() - started
    assert elapsed < 30.0
    print(f"\nPASS structural script contract: {checked} scripts over 50 "
          f"seeded runs, 8 scenes each with the 1/2-3/4-5/6-7/8 role map, "
          f"{elapsed:.1f}s")


def test_hook_contract():
    from paper2short.providers.gateway import ProviderGateway
    checked = 0
    for seed in range(1, 51):
        gw = ProviderGateway(small_config(seed))
        for hook in run_hook_pipeline(gw, PAPER_TEXT):
            assert hook.word_count <= MAX_HOOK_WORDS
            assert validate_hook(hook) == []
            checked += 1
        gw.close()
    print(f"\nPASS hook contract: {checked} hooks over 50 seeded runs, "
          f"all <= {MAX_HOOK_WORDS} words and validator-clean")


def test_duration_arithmetic_exact():
    assert estimate_duration(18) == 6.0
    assert estimate_duration(22) == 22 / 3
    assert round(estimate_duration(22), 2) == 7.33
    low = Fraction(8 * 18, 3)
    high = Fraction(8 * 22, 3)
    assert low == 48
    assert Fraction(480, 10) <= low <= high <= Fraction(587, 10)
    for words in range(18, 23):
        total = sum(Fraction(words, 3) for _ in range(8))
        assert Fraction(480, 10) <= total <= Fraction(587, 10)
        assert estimate_duration(words) == float(Fraction(words, 3))
    print("\nPASS duration arithmetic: estimate_duration(18)=6.0, "
          "estimate_duration(22)=7.33, 8-scene totals within [48.0, 58.7]s, "
          "exact rational arithmetic")


def test_padding_law(fixture_projects):
    deltas = []
    for _, project in fixture_projects:
        assert len(project.segments) == 8
        for seg in project.segments:
            m = seg["manifest"]
            deltas.append(m["video_duration_s"] - m["audio_duration_s"])
    assert len(deltas) == 24
    for delta in deltas:
        assert delta == pytest.approx(0.5, abs=0.05)
    print(f"\nPASS padding law: 24/24 scenes across 3 fixture projects with "
          f"video-audio padding in [{min(deltas):.3f}, {max(deltas):.3f}]s "
          f"(0.5 +/- 0.05)")


def test_assembly_law(fixture_projects):
    worst = 0.0
    for svc, project in fixture_projects:
        started = time.monotonic()
        job = svc.request_merge(project.project_id, "Casey")
        svc.wait(job)
        assert job.status == "succeeded", job.error
        elapsed = time.monotonic() - started
        assert elapsed < 60.0
        final_path, _ = svc.store.final_paths(project.project_id)
        measured = Mp4File(final_path.read_bytes()).video_track().duration_s
        expected = sum(s["manifest"]["video_duration_s"]
                       for s in project.segments) + 2.0
        assert measured == pytest.approx(expected, abs=0.1)
        worst = max(worst, abs(measured - expected))
    print(f"\nPASS assembly law: 3 merged videos decode to sum(scenes)+2.0s "
          f"within 0.1s (worst gap {worst:.4f}s), each merge < 60s")


def test_segmentation_preservation():
    rnd = random.Random(2026)
    alphabet = string.ascii_lowercase + ",.?!"
    for case in range(100):
        tokens = ["".join(rnd.choices(alphabet, k=rnd.randint(1, 9)))
                  for _ in range(rnd.randint(1, 150))]
        sep = ["\n" if rnd.random() < 0.05 else " " for _ in tokens]
        text = "".join(t + s for t, s in zip(tokens, sep))
        segments = segment_text(text)
        assert normalize_ws(" ".join(segments)) == normalize_ws(text), \
            f"case {case} lost text"
    print("\nPASS segmentation preservation: 100/100 randomized edit scripts "
          "reconcatenate to the normalized input")


def test_attribution_template():
    rnd = random.Random(99)
    for _ in range(100):
        n = rnd.randint(1, 10)
        authors = [" ".join("".join(rnd.choices(string.ascii_letters, k=6))
                            for _ in range(2)) for _ in range(n)]
        creator = "".join(rnd.choices(string.ascii_letters, k=8))
        text = default_attribution(authors, creator)
        assert text.startswith("The original research is authored by ")
        assert text.endswith(f"This video is created by {creator} with PaperTok.")
        for author in authors:
            assert text.count(author) == 1
        if n >= 3:
            assert f", and {authors[-1]}" in text
        elif n == 2:
            assert f"{authors[0]} and {authors[1]}" in text
    print("\nPASS attribution template: 100 randomized author lists (1-10 "
          "names), serial join, each author exactly once")


def test_determinism(tmp_path):
    pdf = tmp_path / "paper.pdf"
    pdf.write_bytes(build_pdf(SAMPLE_LINES))
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"video": {"width": 270, "height": 480}}))
    digests = []
    scene_manifests = []
    for run in ("a", "b"):
        out = tmp_path / run
        result = CliRunner().invoke(cli_main, [
            "run", "--pdf", str(pdf), "--hook", "1", "--providers", "mock:42",
            "--out", str(out), "--config", str(config)])
        assert result.exit_code == 0, result.output
        digests.append(hashlib.sha256(
            (out / "final.manifest.json").read_bytes()).hexdigest())
        project_dir = next((out / "projects").iterdir())
        scene_manifests.append(sorted(
            p.read_bytes() for p in project_dir.glob("scene_*.json")))
    assert digests[0] == digests[1]
    assert scene_manifests[0] == scene_manifests[1]
    print(f"\nPASS determinism: two mock:42 runs produced identical "
          f"final.manifest.json (sha256 {digests[0][:16]}...) and "
          f"byte-identical scene manifests ({len(scene_manifests[0])} scenes)")


def test_state_machine_safety():
    kinds = {
        "project_created": {},
        "hooks_ready": {"hooks": [], "scripts": {"hook_1": {}},
                        "voice_recommendations": {}},
        "script_selected": {"hook_id": "hook_1", "text": "t", "voice": {}},
        "segments_planned": {"segments": [
            {"index": 1, "text": "t", "visual_prompt": "p", "status": "pending"}]},
        "segment_status": {"index": 1, "status": "ready"},
        "merge_started": {"credit": {}},
        "merge_failed": {},
        "merged": {"manifest": {"version": 1}},
    }
    rnd = random.Random(5)
    project = Project(project_id="fuzz")
    job = Job(job_id="job_fuzz", kind="scene")
    job_ops = [job.start, lambda: job.set_progress(rnd.random()),
               lambda: job.succeed("r"), lambda: job.fail("e")]
    illegal = 0
    for step in range(1000):
        before = project.state
        kind = rnd.choice(list(kinds))
        try:
            apply_event(project, make_event(kind, kinds[kind], ts=float(step)))
        except IllegalTransition:
            illegal += 1
            assert project.state == before
        assert project.state in STATES
        if project.state != before:
            assert project.state in LEGAL_TRANSITIONS[before]
        snapshot = job.to_dict()
        try:
            rnd.choice(job_ops)()
        except IllegalTransition:
            assert job.to_dict() == snapshot  # terminal jobs never mutate
    assert job.status in ("succeeded", "failed")
    print(f"\nPASS state machine safety: 1000 randomized steps, "
          f"{illegal} illegal transitions all rejected without state change")


def test_end_to_end_latency(tmp_path):
    pdf = tmp_path / "paper.pdf"
    pdf.write_bytes(build_pdf(SAMPLE_LINES))
    out = tmp_path / "out"
    started = time.monotonic()
    result = CliRunner().invoke(cli_main, [
        "run", "--pdf", str(pdf), "--hook", "1", "--providers", "mock:42",
        "--out", str(out)])
    elapsed = time.monotonic() - started
    assert result.exit_code == 0, result.output
    assert elapsed < 120.0
    parsed = Mp4File((out / "final.mp4").read_bytes())
    assert parsed.video_track().width == 1080
    assert parsed.video_track().height == 1920
    print(f"\nPASS end-to-end latency: fixture PDF -> final.mp4 "
          f"(1080x1920) in {elapsed:.1f}s (< 120s) with mock providers")
