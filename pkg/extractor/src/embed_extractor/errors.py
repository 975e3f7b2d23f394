"""Extractor failure types."""

from __future__ import annotations


class ExtractorError(Exception):
    code = "error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ModelLoadError(ExtractorError):
    code = "model_load"


class InputError(ExtractorError):
    code = "input"
