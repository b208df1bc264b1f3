"""Newspaper scan digitization: layout cleanup, legibility gating,
retrieval OCR, dictionary filtering, and article association."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
