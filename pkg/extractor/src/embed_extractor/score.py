"""Teacher-forced token log-probabilities under a causal LM.

Each sentence is scored independently (concatenating input files cannot
change any score). The array length per sentence equals the model's token
count for it; with the byte-level tokenizer that is the UTF-8 byte count
plus one end-of-sequence marker.
"""

from __future__ import annotations

import json

import torch

from .embed import read_lines
from .errors import InputError
from .models import load_causal


def score_lines(model, tokenizer, lines: list[str]) -> list[list[float]]:
    bos = model.config.bos_token_id
    if bos is None:
        raise InputError("causal model has no BOS token to anchor scoring")
    records = []
    with torch.no_grad():
        for line in lines:
            target = tokenizer(line).input_ids
            ids = torch.tensor([[bos] + target], dtype=torch.long)
            logits = model(input_ids=ids).logits[0, :-1]  # next-token logits
            logprobs = torch.log_softmax(logits.to(torch.float64), dim=-1)
            picked = logprobs[torch.arange(len(target)), torch.tensor(target)]
            records.append([float(v) for v in picked])
    return records


def score_logprobs(model_id: str, input_path: str, output_path: str, seed: int = 0) -> str:
    lines = read_lines(input_path)
    tokenizer, model = load_causal(model_id, seed=seed)
    records = score_lines(model, tokenizer, lines)
    with open(output_path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps({"logprobs": rec}) + "\n")
    return output_path
