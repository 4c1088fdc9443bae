"""paper2short: research paper PDF to short-form vertical video."""

__version__ = "0.1.0"
