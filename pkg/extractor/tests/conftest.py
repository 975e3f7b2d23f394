from __future__ import annotations

import pytest


@pytest.fixture
def sentences(tmp_path) -> str:
    lines = [
        "intent : play music ; play [ muse : artist ] on [ spotify : service ]",
        "intent : rate book ; rate [ this book : object type ] [ 5 : rating value ] stars",
        "intent : get weather ; weather in [ paris : city ]",
        "intent : play music ; play [ muse : artist ] on [ spotify : service ]",
        "intent : add to playlist ; add [ muse : artist ] to [ chill vibes : playlist ]",
        "intent : get weather ; will it rain in [ tokyo : city ]",
        "intent : play music ; start my [ workout mix : playlist ] on [ deezer : service ]",
        "intent : rate book ; give [ the novel : object type ] [ two : rating value ] points",
    ]
    path = tmp_path / "sentences.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)
