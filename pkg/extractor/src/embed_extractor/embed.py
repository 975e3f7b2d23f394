"""Sentence embedding: mean-pooled encoder states, optional fine-tuning.

Rows follow input line order. Identical lines are encoded once and written
to every occurrence, so duplicates are bit-identical regardless of how
batching pads the others.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .emb1 import write_emb1
from .errors import InputError
from .models import load_seq2seq


@dataclass
class ExtractorConfig:
    model: str
    input_path: str
    output_path: str
    finetune_corpus: str | None = None
    finetune_iterations: int = 100
    batch_size: int = 16
    seed: int = 0


def read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise InputError(f"{path}: no input lines")
    return lines


def _mean_pooled(model, tokenizer, lines: list[str], batch_size: int) -> np.ndarray:
    encoder = model.get_encoder()
    rows = []
    with torch.no_grad():
        for start in range(0, len(lines), batch_size):
            batch = lines[start : start + batch_size]
            enc = tokenizer(batch, return_tensors="pt", padding=True)
            states = encoder(
                input_ids=enc.input_ids, attention_mask=enc.attention_mask
            ).last_hidden_state
            mask = enc.attention_mask.unsqueeze(-1).to(states.dtype)
            pooled = (states * mask).sum(dim=1) / mask.sum(dim=1)
            rows.append(pooled.to(torch.float32).numpy())
    return np.concatenate(rows, axis=0)


def embed_lines(model, tokenizer, lines: list[str], batch_size: int = 16) -> np.ndarray:
    unique: list[str] = []
    index: dict[str, int] = {}
    for line in lines:
        if line not in index:
            index[line] = len(unique)
            unique.append(line)
    pooled = _mean_pooled(model, tokenizer, unique, batch_size)
    return pooled[[index[line] for line in lines]]


def embed_file(config: ExtractorConfig) -> str:
    """Write one EMB1 row per input line; deterministic for (model, seed)."""
    lines = read_lines(config.input_path)
    tokenizer, model = load_seq2seq(config.model, seed=config.seed)
    values = embed_lines(model, tokenizer, lines, config.batch_size)
    write_emb1(config.output_path, values)
    return config.output_path


def _corruption_batch(tokenizer, lines: list[str], rng: np.random.Generator):
    """T5-style span corruption: ~15% of tokens in short spans become
    sentinels in the input; the target spells the dropped spans out."""
    inputs, targets = [], []
    eos = tokenizer.eos_token_id
    for line in lines:
        ids = tokenizer(line).input_ids[:-1]  # strip eos; re-added below
        if len(ids) < 4:
            inputs.append(ids + [eos])
            targets.append([eos])
            continue
        masked_input: list[int] = []
        target: list[int] = []
        sentinel = 0
        i = 0
        while i < len(ids):
            if sentinel < 32 and rng.random() < 0.05:
                span = int(rng.integers(1, 4))
                sid = tokenizer.convert_tokens_to_ids(f"<extra_id_{sentinel}>")
                masked_input.append(sid)
                target.append(sid)
                target.extend(ids[i : i + span])
                sentinel += 1
                i += span
            else:
                masked_input.append(ids[i])
                i += 1
        if sentinel == 0:  # force at least one masked span
            sid = tokenizer.convert_tokens_to_ids("<extra_id_0>")
            pos = int(rng.integers(len(ids)))
            target = [sid, ids[pos]]
            masked_input = ids[:pos] + [sid] + ids[pos + 1 :]
        inputs.append(masked_input + [eos])
        targets.append(target + [eos])
    return inputs, targets


def _pad(batches: list[list[int]], pad_id: int) -> tuple[torch.Tensor, torch.Tensor]:
    width = max(len(b) for b in batches)
    ids = torch.full((len(batches), width), pad_id, dtype=torch.long)
    mask = torch.zeros((len(batches), width), dtype=torch.long)
    for i, b in enumerate(batches):
        ids[i, : len(b)] = torch.tensor(b, dtype=torch.long)
        mask[i, : len(b)] = 1
    return ids, mask


def finetune(model, tokenizer, corpus_lines: list[str], iterations: int, batch_size: int, seed: int):
    """Run ``iterations`` span-corruption language-modeling steps in place."""
    if iterations <= 0:
        return model
    rng = np.random.default_rng(seed)
    torch.manual_seed(seed + 1)
    optimizer = torch.optim.AdamW(model.parameters(), lr=1e-3)
    model.train()
    for _ in range(iterations):
        picks = rng.integers(len(corpus_lines), size=min(batch_size, len(corpus_lines)))
        batch = [corpus_lines[i] for i in picks]
        inputs, targets = _corruption_batch(tokenizer, batch, rng)
        input_ids, attention_mask = _pad(inputs, tokenizer.pad_token_id)
        label_ids, label_mask = _pad(targets, tokenizer.pad_token_id)
        labels = label_ids.masked_fill(label_mask == 0, -100)
        loss = model(input_ids=input_ids, attention_mask=attention_mask, labels=labels).loss
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
    model.eval()
    return model


def finetune_then_embed(config: ExtractorConfig) -> str:
    """Fine-tune on the corpus, then embed; zero iterations is a no-op path
    byte-identical to plain embedding."""
    if config.finetune_corpus is None:
        raise InputError("finetune_then_embed needs a finetune corpus path")
    lines = read_lines(config.input_path)
    corpus_lines = read_lines(config.finetune_corpus)
    tokenizer, model = load_seq2seq(config.model, seed=config.seed)
    finetune(model, tokenizer, corpus_lines, config.finetune_iterations, config.batch_size, config.seed)
    values = embed_lines(model, tokenizer, lines, config.batch_size)
    write_emb1(config.output_path, values)
    return config.output_path
