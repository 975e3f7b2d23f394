from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # for `util` and fixture helpers

from auglang.codec import LabeledExample, SlotSchema

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture
def fixtures_dir() -> str:
    return FIXTURES_DIR


@pytest.fixture
def toy_schema() -> SlotSchema:
    return SlotSchema(
        ("artist", "service", "playlist", "object_type", "rating_value", "city"),
        ("PlayMusic", "AddToPlaylist", "RateBook", "GetWeather"),
    )


def _ex(tokens: str, tags: str, intent: str) -> LabeledExample:
    return LabeledExample(tokens.split(), tags.split(), intent)


@pytest.fixture
def toy_corpus() -> list[LabeledExample]:
    return [
        _ex("play muse on spotify", "O B-artist O B-service", "PlayMusic"),
        _ex("play the black keys", "O B-artist I-artist I-artist", "PlayMusic"),
        _ex("put this song in my roadtrip playlist", "O O O O O B-playlist O", "AddToPlaylist"),
        _ex("add muse to chill vibes", "O B-artist O B-playlist I-playlist", "AddToPlaylist"),
        _ex("rate this book 5 stars", "O B-object_type I-object_type B-rating_value O", "RateBook"),
        _ex("give the novel two points", "O B-object_type I-object_type B-rating_value O", "RateBook"),
        _ex("weather in paris tomorrow", "O O B-city O", "GetWeather"),
        _ex("will it rain in tokyo", "O O O O B-city", "GetWeather"),
    ]
