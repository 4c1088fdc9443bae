"""PDF ingest: text extraction, metadata, first-page screenshot.

Produces the SourcePaper record every downstream stage consumes. Partial
failures (no byline, no extractable text) become warnings, not errors.
"""
from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from PIL import Image, ImageDraw

from .config import AppConfig
from .errors import EmptyDocument, NotAPdf, RenderFailure, SchemaViolation, ProviderUnavailable
from .media.fonts import load_font
from .pdfio import PdfDocument
from .providers.base import TextRequest
from .textutil import dehyphenate, normalize_ws


@dataclass
class SourcePaper:
    paper_id: str
    title: str
    authors: list[str]
    body_text: str
    page_count: int
    first_page_image: bytes  # PNG
    ingest_warnings: list[str] = field(default_factory=list)


def _prompt(name: str) -> str:
    return resources.files("paper2short").joinpath(f"prompts/{name}.txt").read_text()


def _normalize_body(text: str) -> str:
    text = dehyphenate(text)
    lines = [normalize_ws(ln) for ln in text.splitlines()]
    out: list[str] = []
    for ln in lines:
        if ln:
            out.append(ln)
        elif out and out[-1]:
            out.append("")
    return "\n".join(out).strip()


def render_first_page(paper_bytes: bytes, target_width: int = 1080) -> bytes:
    """Raster image of page 1 at target_width, aspect ratio preserved.

    Without a rasterizer available we lay the page's extracted text out
    on a white canvas of the correct geometry; corrupt page streams
    surface as RenderFailure.
    """
    doc = PdfDocument(paper_bytes)
    if not doc.pages:
        raise RenderFailure("document has no pages")
    page = doc.pages[0]
    x0, y0, x1, y1 = doc.page_media_box(page)
    pw, ph = abs(x1 - x0), abs(y1 - y0)
    if pw <= 0 or ph <= 0:
        raise RenderFailure("degenerate page geometry")
    text = doc.page_text(page)  # raises RenderFailure on corrupt streams
    height = round(target_width * ph / pw)
    img = Image.new("RGB", (target_width, height), (255, 255, 255))
    draw = ImageDraw.Draw(img)
    margin = target_width // 12
    draw.rectangle([margin // 3, margin // 3,
                    target_width - margin // 3, height - margin // 3],
                   outline=(190, 190, 190), width=2)
    body_size = max(8, target_width // 55)
    title_size = round(body_size * 1.7)
    y = margin
    for i, line in enumerate(ln for ln in text.splitlines() if ln.strip()):
        font = load_font(title_size if i == 0 else body_size)
        step = round((title_size if i == 0 else body_size) * 1.45)
        if y + step > height - margin:
            break
        draw.text((margin, y), line[:120], font=font, fill=(20, 20, 20))
        y += step + (body_size // 2 if i == 0 else 0)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


_NAME_TOKEN = re.compile(r"^[A-Z][\w.'\-]*$")


def _byline_fallback(doc: PdfDocument) -> list[str]:
    """Heuristic byline scan of the first page, used when no text
    provider is available: metadata Author field first, then lines of
    name-shaped chunks near the top."""
    meta_author = doc.info().get("author")
    if meta_author:
        chunks = re.split(r",|;| and ", meta_author)
        names = [normalize_ws(c) for c in chunks if c.strip()]
        if names:
            return names
    return []


def extract_title_authors(doc: PdfDocument, body_text: str, gateway=None,
                          char_budget: int = 120_000) -> tuple[str, list[str], list[str]]:
    """(title, authors, warnings); authors may be empty."""
    warnings: list[str] = []
    first_pages = "\n".join(doc.page_text(p) for p in doc.pages[:2]
                            if p is not None) if doc.pages else body_text
    first_pages = first_pages[:char_budget]
    if gateway is not None:
        try:
            meta = gateway.complete_text(TextRequest(
                system_prompt=_prompt("ingest/paper_meta"),
                user_content=first_pages or body_text[:4000],
                response_schema="paper_meta",
                temperature=0.0,
            ))
            title = normalize_ws(meta.get("title", ""))
            authors = [normalize_ws(a) for a in meta.get("authors", []) if a.strip()]
            if authors:
                return title, authors, warnings
            warnings.append("no detectable byline; fill in authors manually")
            fallback = _byline_fallback(doc)
            return title, fallback, warnings
        except (SchemaViolation, ProviderUnavailable) as exc:
            warnings.append(f"metadata extraction degraded: {exc}")
    title = doc.info().get("title", "")
    if not title:
        lines = [ln for ln in body_text.splitlines() if ln.strip()]
        title = lines[0][:200] if lines else ""
    authors = _byline_fallback(doc)
    if not authors:
        warnings.append("no detectable byline; fill in authors manually")
    return normalize_ws(title), authors, warnings


def ingest_pdf(blob: bytes, gateway=None, config: AppConfig | None = None,
               paper_id: str = "paper") -> SourcePaper:
    """Parse a PDF upload into a SourcePaper.

    Raises NotAPdf / EncryptedPdf / EmptyDocument; everything partial
    (missing byline, image-only pages) is recorded as a warning.
    """
    config = config or AppConfig()
    if not blob:
        raise NotAPdf("empty upload")
    doc = PdfDocument(blob)  # raises NotAPdf / EncryptedPdf
    warnings: list[str] = []
    body_text = _normalize_body(doc.text())[:config.ingest_char_budget]

    try:
        image = render_first_page(blob, target_width=1080)
    except RenderFailure as exc:
        if not body_text:
            raise EmptyDocument(
                "no extractable text and page render failed") from exc
        image = b""
        warnings.append(f"first-page render failed: {exc}")
    if not doc.pages:
        raise EmptyDocument("document has no pages")
    if not body_text:
        warnings.append("no extractable text")

    title, authors, meta_warnings = extract_title_authors(
        doc, body_text, gateway=gateway, char_budget=config.ingest_char_budget)
    warnings.extend(meta_warnings)
    authors = [a for a in authors if a.strip()]

    return SourcePaper(
        paper_id=paper_id,
        title=title,
        authors=authors,
        body_text=body_text,
        page_count=len(doc.pages),
        first_page_image=image,
        ingest_warnings=warnings,
    )


def extract_authors(paper: SourcePaper) -> list[str]:
    return list(paper.authors)


# -- persistence: {paper.json, page1.png, body.txt} --------------------

def save_source_paper(paper: SourcePaper, directory: str | Path) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "body.txt").write_text(paper.body_text)
    (d / "page1.png").write_bytes(paper.first_page_image)
    (d / "paper.json").write_text(json.dumps({
        "paper_id": paper.paper_id,
        "title": paper.title,
        "authors": paper.authors,
        "page_count": paper.page_count,
        "ingest_warnings": paper.ingest_warnings,
    }, indent=2))
    return d


def load_source_paper(directory: str | Path) -> SourcePaper:
    d = Path(directory)
    meta = json.loads((d / "paper.json").read_text())
    return SourcePaper(
        paper_id=meta["paper_id"],
        title=meta["title"],
        authors=meta["authors"],
        body_text=(d / "body.txt").read_text(),
        page_count=meta["page_count"],
        first_page_image=(d / "page1.png").read_bytes(),
        ingest_warnings=meta.get("ingest_warnings", []),
    )
