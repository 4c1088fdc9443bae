import pytest

from paper2short.errors import EncryptedPdf, NotAPdf
from paper2short.pdfio import PdfDocument

from conftest import SAMPLE_LINES, build_pdf


def test_rejects_non_pdf():
    with pytest.raises(NotAPdf):
        PdfDocument(b"plain text, not a pdf")
    with pytest.raises(NotAPdf):
        PdfDocument(b"")


def test_rejects_encrypted():
    blob = build_pdf(SAMPLE_LINES)
    # splice an /Encrypt key into the trailer dictionary
    tampered = blob.replace(b"trailer", b"trailer", 1)
    idx = tampered.rfind(b"trailer")
    brace = tampered.index(b"<<", idx)
    tampered = tampered[:brace + 2] + b" /Encrypt 99 0 R " + tampered[brace + 2:]
    with pytest.raises(EncryptedPdf):
        PdfDocument(tampered)


def test_extracts_text_and_pages(sample_pdf):
    doc = PdfDocument(sample_pdf)
    assert len(doc.pages) == 1
    text = doc.text()
    assert "Short Video Generation from Research Papers" in text
    assert "Meziah Ruby Cristobal" in text
    assert "vertical video formats" in text


def test_multipage(sample_pdf):
    blob = build_pdf(["Page body line"], pages=3)
    doc = PdfDocument(blob)
    assert len(doc.pages) == 3
    assert doc.text().count("Page body line") == 3


def test_media_box(sample_pdf):
    doc = PdfDocument(sample_pdf)
    assert [float(v) for v in doc.page_media_box(doc.pages[0])] == [0, 0, 612, 792]
