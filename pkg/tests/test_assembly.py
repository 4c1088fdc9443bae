import random
import string

import pytest

from paper2short import assembly
from paper2short.errors import MissingScene
from paper2short.ingest import SourcePaper
from paper2short.media.mp4 import Mp4File
from paper2short.storyboard import Segment, generate_scene, generate_visual_prompt
from paper2short.voice import VoiceStyle

STYLE = VoiceStyle(baseline="an influencer vibe with fast speech",
                   recommended_modifier="", user_modifier="",
                   merged_prompt="Speak fast.")


def _paper(authors):
    return SourcePaper(paper_id="p", title="A Study", authors=authors,
                       body_text="body", page_count=1, first_page_image=b"")


def test_join_authors_serial_rule():
    assert assembly.join_authors(["Ada"]) == "Ada"
    assert assembly.join_authors(["Ada", "Ben"]) == "Ada and Ben"
    assert assembly.join_authors(["Ada", "Ben", "Cy"]) == "Ada, Ben, and Cy"
    assert assembly.join_authors([]) == "the original authors"
    assert assembly.join_authors(["A", "B", "C", "D"], max_authors=3) == \
        "A, B, C, et al."


def test_default_attribution_template():
    text = assembly.default_attribution(["Ada Lovelace", "Ben Ng"], "Casey")
    assert text == ("The original research is authored by Ada Lovelace and "
                    "Ben Ng. This video is created by Casey with PaperTok.")


def test_attribution_without_creator():
    text = assembly.default_attribution(["Ada"], "")
    assert text == ("The original research is authored by Ada. "
                    "This video is created with PaperTok.")


def test_attribution_each_author_exactly_once():
    rnd = random.Random(7)
    for _ in range(30):
        n = rnd.randint(1, 10)
        authors = ["".join(rnd.choices(string.ascii_uppercase, k=8))
                   for _ in range(n)]
        text = assembly.default_attribution(authors, "Creator Name")
        for a in authors:
            assert text.count(a) == 1
        assert text.startswith("The original research is authored by ")
        assert text.endswith("with PaperTok.")


def test_credit_scene_two_seconds_silent(config):
    credit = assembly.build_credit_scene(_paper(["Ada"]), "Casey", config=config)
    f = Mp4File(credit.rendered_clip)
    assert f.video_track().duration_s == pytest.approx(2.0)
    at = f.audio_track()
    assert at.duration_s == pytest.approx(2.0)
    assert f.audio_pcm() == b"\0" * len(f.audio_pcm())
    assert "Ada" in credit.attribution_text


def test_credit_scene_override_text(config):
    credit = assembly.build_credit_scene(_paper(["Ada"]), "Casey",
                                         override_text="Custom credits.",
                                         config=config)
    assert credit.attribution_text == "Custom credits."


def _scene(gateway, config, index, text):
    seg = Segment(index=index, text=text)
    seg.visual_prompt = generate_visual_prompt(gateway, seg)
    return generate_scene(gateway, seg, STYLE, config=config)


def test_merge_duration_is_sum_plus_credit(gateway, config):
    scenes = [_scene(gateway, config, i,
                     f"Scene {i} explains one finding of the paper clearly.")
              for i in (1, 2)]
    credit = assembly.build_credit_scene(_paper(["Ada", "Ben"]), "Casey",
                                         config=config)
    final = assembly.merge_video(scenes, credit, config=config)
    measured = Mp4File(final.media_bytes).video_track().duration_s
    expected = sum(s.video_duration_s for s in scenes) + 2.0
    assert measured == pytest.approx(expected, abs=0.1)
    m = final.manifest
    assert m["scene_order"] == [1, 2]
    assert m["cut_points_s"][0] == 0.0
    assert m["credit_start_s"] == pytest.approx(
        sum(s.video_duration_s for s in scenes), abs=0.01)
    assert len(m["inputs"]) == 3


def test_merge_requires_scenes():
    credit_paper = _paper(["Ada"])
    with pytest.raises(MissingScene):
        assembly.merge_video([], assembly.build_credit_scene(
            credit_paper, "", config=None), config=None)
