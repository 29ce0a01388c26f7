"""Bundled 512x512 test pair (see tools/make_standard_images.py)."""
from importlib.resources import files

from ..image import load_pgm


def path(name: str):
    return files(__name__) / f"{name}.pgm"


def asset():
    """Grayscale astronaut, the host image."""
    return load_pgm(path("asset"))


def watermark():
    """Cameraman, the payload image."""
    return load_pgm(path("watermark"))


def standard_pair():
    return asset(), watermark()
