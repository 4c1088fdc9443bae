import numpy as np

from paper2short.config import CaptionStyle
from paper2short.media import frames


def test_jpeg_roundtrip_shape():
    frame = np.zeros((128, 64, 3), dtype=np.uint8)
    frame[:, :, 0] = 200
    out = frames.decode_jpeg(frames.encode_jpeg(frame, 90))
    assert out.shape == (128, 64, 3)
    assert abs(int(out[5, 5, 0]) - 200) < 16  # red channel survives


def test_prompt_color_deterministic_and_distinct():
    a = frames.prompt_color("ocean waves at night")
    b = frames.prompt_color("a spinning coin on a desk")
    assert a == frames.prompt_color("ocean waves at night")
    assert a != b
    assert all(32 <= c <= 223 for c in a)


def test_render_mock_frame_uses_prompt_color():
    frame = frames.render_mock_frame("some prompt", 0, 30, 64, 128)
    assert frame.shape == (128, 64, 3)
    # corner pixel carries the background color
    assert tuple(frame[-1, -1]) == frames.prompt_color("some prompt")


def test_caption_overlay_and_composite():
    style = CaptionStyle()
    overlay, alpha = frames.caption_overlay("Hello world caption", 270, 480, style)
    assert overlay.shape == (480, 270, 3)
    assert alpha.max() > 0  # some text pixels present
    base = np.zeros((480, 270, 3), dtype=np.uint8)
    out = frames.composite(base, overlay, alpha)
    assert out.max() > 0
    assert out.shape == base.shape
    # text sits in the lower part of the frame
    assert out[: 480 // 2].max() == 0


def test_composite_blank_caption_is_identity():
    style = CaptionStyle()
    overlay, alpha = frames.caption_overlay("", 270, 480, style)
    base = np.full((480, 270, 3), 77, dtype=np.uint8)
    assert np.array_equal(frames.composite(base, overlay, alpha), base)


def test_render_credit_frame_without_background():
    frame = frames.render_credit_frame(None, "Attribution text here", 270, 480,
                                       CaptionStyle())
    assert frame.shape == (480, 270, 3)
    assert frame.max() > 0
