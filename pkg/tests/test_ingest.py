import pytest

from paper2short import ingest
from paper2short.errors import EmptyDocument, NotAPdf
from paper2short.providers.gateway import ProviderGateway

from conftest import SAMPLE_LINES, build_pdf


def test_rejects_garbage():
    with pytest.raises(NotAPdf):
        ingest.ingest_pdf(b"not a pdf at all")


def test_ingest_extracts_metadata(sample_pdf, gateway, config):
    paper = ingest.ingest_pdf(sample_pdf, gateway=gateway, config=config)
    assert paper.title == "Short Video Generation from Research Papers"
    assert "Meziah Ruby Cristobal" in paper.authors
    assert len(paper.authors) == 3
    assert paper.page_count == 1
    assert "engaging short" in paper.body_text
    assert paper.first_page_image[:8] == b"\x89PNG\r\n\x1a\n"


def test_ingest_without_gateway_uses_heuristics(sample_pdf, config):
    paper = ingest.ingest_pdf(sample_pdf, gateway=None, config=config)
    assert paper.title
    assert isinstance(paper.authors, list)


def test_empty_document(config):
    blob = build_pdf([""])
    # a blank page still renders, so this ingests with warnings
    paper = ingest.ingest_pdf(blob, gateway=None, config=config)
    assert paper.ingest_warnings


def test_save_and_load_roundtrip(tmp_path, sample_pdf, gateway, config):
    paper = ingest.ingest_pdf(sample_pdf, gateway=gateway, config=config)
    d = tmp_path / "paper"
    ingest.save_source_paper(paper, d)
    assert (d / "paper.json").exists()
    assert (d / "page1.png").exists()
    assert (d / "body.txt").exists()
    loaded = ingest.load_source_paper(d)
    assert loaded.title == paper.title
    assert loaded.authors == paper.authors
    assert loaded.body_text == paper.body_text
    assert loaded.first_page_image == paper.first_page_image
