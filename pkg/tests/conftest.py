import io

import pytest
from reportlab.lib.pagesizes import letter
from reportlab.pdfgen import canvas

from paper2short.config import AppConfig

SAMPLE_LINES = [
    "Short Video Generation from Research Papers",
    "Meziah Ruby Cristobal, Alex Rivera, Jordan Lee",
    "",
    "Abstract",
    "We study how research papers can be transformed into engaging short",
    "videos. Our system extracts key findings and turns them into scripts.",
    "The findings suggest that automated pipelines reduce production time.",
    "Viewers retained more information when hooks posed a question first.",
    "Cellular devices were the dominant viewing platform in our study.",
    "Participants preferred fast speech with an authoritative tone overall.",
    "We evaluate with fifty participants and report engagement metrics.",
    "The results show a strong preference for vertical video formats.",
]


def build_pdf(lines, pages=1):
    buf = io.BytesIO()
    c = canvas.Canvas(buf, pagesize=letter)
    for _ in range(pages):
        t = c.beginText(72, 720)
        for line in lines:
            t.textLine(line)
        c.drawText(t)
        c.showPage()
    c.save()
    return buf.getvalue()


@pytest.fixture(scope="session")
def sample_pdf():
    return build_pdf(SAMPLE_LINES)


def small_config(seed=42):
    """Mock providers at a small frame size so media tests stay fast."""
    config = AppConfig()
    config.providers.text = f"mock:{seed}"
    config.providers.speech = f"mock:{seed}"
    config.providers.video = f"mock:{seed}"
    config.video.width = 270
    config.video.height = 480
    return config


@pytest.fixture
def config():
    return small_config()


@pytest.fixture
def gateway(config):
    from paper2short.providers.gateway import ProviderGateway
    gw = ProviderGateway(config)
    yield gw
    gw.close()
