"""Corpus file I/O: CoNLL-style blocks and JSONL records.

CoNLL format, one block per example, blank line between blocks::

    # intent = PlayMusic
    play	O
    muse	B-artist

Additional ``# key = value`` header lines (e.g. ``# source = synthetic``)
are preserved as per-example metadata. The JSONL alternative is one object
per line with ``tokens``, ``tags`` and ``intent``; extra fields become
metadata.
"""

from __future__ import annotations

import json
import os

from .codec import LabeledExample, SlotSchema
from .errors import CorpusFormatError

Block = tuple[LabeledExample, dict[str, str]]


def read_conll_blocks(path: str) -> list[Block]:
    blocks: list[Block] = []
    meta: dict[str, str] = {}
    tokens: list[str] = []
    tags: list[str] = []

    def flush(lineno: int):
        nonlocal meta, tokens, tags
        if not meta and not tokens:
            return
        if "intent" not in meta:
            raise CorpusFormatError(f"{path}:{lineno}: block without '# intent =' header")
        if not tokens:
            raise CorpusFormatError(f"{path}:{lineno}: block without token lines")
        intent = meta.pop("intent")
        blocks.append((LabeledExample(tokens, tags, intent), meta))
        meta, tokens, tags = {}, [], []

    with open(path, encoding="utf-8") as fh:
        lineno = 0
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            # Token lines always carry a tab, so '#'-tokens stay unambiguous.
            if line.startswith("#") and "\t" not in line:
                if tokens:
                    raise CorpusFormatError(
                        f"{path}:{lineno}: header line after token lines"
                    )
                body = line[1:].strip()
                key, sep, value = body.partition("=")
                if not sep:
                    raise CorpusFormatError(f"{path}:{lineno}: header line without '='")
                meta[key.strip()] = value.strip()
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise CorpusFormatError(
                    f"{path}:{lineno}: expected 'token<TAB>tag', got {line!r}"
                )
            tokens.append(cols[0])
            tags.append(cols[1])
        flush(lineno + 1)
    return blocks


def write_conll(path: str, examples: list[LabeledExample], meta: list[dict[str, str]] | None = None):
    if meta is not None and len(meta) != len(examples):
        raise CorpusFormatError("metadata list length does not match example count")
    with open(path, "w", encoding="utf-8") as fh:
        for i, ex in enumerate(examples):
            fh.write(f"# intent = {ex.intent}\n")
            if meta is not None:
                for key in sorted(meta[i]):
                    fh.write(f"# {key} = {meta[i][key]}\n")
            for token, tag in zip(ex.tokens, ex.tags):
                if "\t" in token or "\n" in token or "\t" in tag or "\n" in tag:
                    raise CorpusFormatError(
                        f"token/tag {token!r}/{tag!r} cannot be written as CoNLL"
                    )
                fh.write(f"{token}\t{tag}\n")
            fh.write("\n")


def read_jsonl_blocks(path: str) -> list[Block]:
    blocks: list[Block] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: invalid JSON ({exc})")
            if not isinstance(obj, dict):
                raise CorpusFormatError(f"{path}:{lineno}: expected an object per line")
            missing = {"tokens", "tags", "intent"} - obj.keys()
            if missing:
                raise CorpusFormatError(
                    f"{path}:{lineno}: missing fields {sorted(missing)}"
                )
            example = LabeledExample(
                [str(t) for t in obj["tokens"]],
                [str(t) for t in obj["tags"]],
                str(obj["intent"]),
            )
            extra = {
                k: str(v) for k, v in obj.items() if k not in ("tokens", "tags", "intent")
            }
            blocks.append((example, extra))
    return blocks


def write_jsonl(path: str, examples: list[LabeledExample], meta: list[dict[str, str]] | None = None):
    if meta is not None and len(meta) != len(examples):
        raise CorpusFormatError("metadata list length does not match example count")
    with open(path, "w", encoding="utf-8") as fh:
        for i, ex in enumerate(examples):
            obj: dict = {"tokens": ex.tokens, "tags": ex.tags, "intent": ex.intent}
            if meta is not None:
                for key in sorted(meta[i]):
                    obj[key] = meta[i][key]
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def detect_format(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    return "jsonl" if ext in (".jsonl", ".json") else "conll"


def read_blocks(path: str, fmt: str | None = None) -> list[Block]:
    fmt = fmt or detect_format(path)
    if fmt == "jsonl":
        return read_jsonl_blocks(path)
    if fmt == "conll":
        return read_conll_blocks(path)
    raise CorpusFormatError(f"unknown corpus format {fmt!r}")


def read_corpus(path: str, fmt: str | None = None) -> list[LabeledExample]:
    return [example for example, _ in read_blocks(path, fmt)]


def write_corpus(
    path: str,
    examples: list[LabeledExample],
    meta: list[dict[str, str]] | None = None,
    fmt: str | None = None,
):
    fmt = fmt or detect_format(path)
    if fmt == "jsonl":
        write_jsonl(path, examples, meta)
    elif fmt == "conll":
        write_conll(path, examples, meta)
    else:
        raise CorpusFormatError(f"unknown corpus format {fmt!r}")


def infer_schema(examples: list[LabeledExample]) -> SlotSchema:
    """Build a schema from the labels observed in a corpus, first-seen order."""
    intents: list[str] = []
    slot_types: list[str] = []
    for ex in examples:
        if ex.intent not in intents:
            intents.append(ex.intent)
        for tag in ex.tags:
            if tag != "O":
                slot_type = tag[2:]
                if slot_type and slot_type not in slot_types:
                    slot_types.append(slot_type)
    return SlotSchema(tuple(slot_types), tuple(intents))


def schema_from_file(path: str) -> SlotSchema:
    """Load a schema from a corpus file or a ``{"intents", "slot_types"}`` JSON."""
    if os.path.splitext(path)[1].lower() == ".json":
        with open(path, encoding="utf-8") as fh:
            content = fh.read()
        obj = None
        try:
            obj = json.loads(content)
        except json.JSONDecodeError:
            pass
        if isinstance(obj, dict) and "intents" in obj:
            return SlotSchema(tuple(obj.get("slot_types", ())), tuple(obj["intents"]))
    return infer_schema(read_corpus(path))
