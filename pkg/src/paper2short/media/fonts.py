"""TrueType font lookup for caption and overlay rendering."""
from __future__ import annotations

import functools
from pathlib import Path

from PIL import ImageFont

_CANDIDATES = [
    "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf",
    "/usr/share/fonts/truetype/dejavu/DejaVuSans-Bold.ttf",
]


@functools.lru_cache(maxsize=None)
def _font_path() -> str:
    for cand in _CANDIDATES:
        if Path(cand).exists():
            return cand
    # matplotlib ships DejaVu with its data files
    import matplotlib
    p = Path(matplotlib.__file__).parent / "mpl-data" / "fonts" / "ttf" / "DejaVuSans.ttf"
    if p.exists():
        return str(p)
    raise RuntimeError("no TrueType font available for caption rendering")


@functools.lru_cache(maxsize=32)
def load_font(size: int) -> ImageFont.FreeTypeFont:
    return ImageFont.truetype(_font_path(), size=size)
