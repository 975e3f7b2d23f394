"""Pipeline stages between the corpus files: subsampling, generation
round-trip, assembly, and cross-run aggregation.

Every stage is a pure function of its input files; identical configuration
and seeds reproduce identical output bytes.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

import numpy as np
import requests

from .codec import LabeledExample, SlotSchema, validate_example
from .errors import ConfigError, GenerationProtocolError, ToolkitError


def subsample_per_intent(corpus, ratio: float, rng_seed: int) -> list[LabeledExample]:
    """Keep round(ratio * n) examples per intent, at least one each.

    Selection is uniform without replacement; output preserves the original
    corpus order.
    """
    if not 0.0 < ratio <= 1.0:
        raise ConfigError(f"sampling ratio must be in (0, 1], got {ratio}")
    corpus = list(corpus)
    if not corpus:
        raise ConfigError("cannot subsample an empty corpus")
    by_intent: dict[str, list[int]] = {}
    for idx, ex in enumerate(corpus):
        by_intent.setdefault(ex.intent, []).append(idx)
    rng = np.random.default_rng(rng_seed)
    keep: list[int] = []
    for intent in sorted(by_intent):
        indices = by_intent[intent]
        count = max(1, int(math.floor(ratio * len(indices) + 0.5)))
        count = min(count, len(indices))
        chosen = rng.choice(len(indices), size=count, replace=False)
        keep.extend(indices[i] for i in chosen)
    keep.sort()
    return [corpus[i] for i in keep]


def assemble_augmented_set(
    real, synthetic, schema: SlotSchema
) -> tuple[list[LabeledExample], list[dict[str, str]]]:
    """Concatenate real and synthetic examples with a provenance flag.

    Both corpora must validate against the same schema; the returned
    metadata carries ``source: real|synthetic`` per example.
    """
    examples: list[LabeledExample] = []
    meta: list[dict[str, str]] = []
    for source, group in (("real", real), ("synthetic", synthetic)):
        for ex in group:
            try:
                validate_example(ex, schema)
            except ToolkitError as exc:
                raise ConfigError(
                    f"{source} example {ex.tokens!r} does not fit the shared schema: {exc}"
                )
            examples.append(ex)
            meta.append({"source": source})
    return examples, meta


def _post_batch(endpoint: str, batch: list[str], timeout: float, retries: int) -> list[str]:
    """POST one prompt batch; retries with backoff on transient failures
    (timeouts, connection errors, 5xx), fails fast on protocol violations."""
    delay = 0.5
    last_error: Exception | None = None
    for attempt in range(retries + 1):
        try:
            response = requests.post(endpoint, json={"prompts": batch}, timeout=timeout)
        except (requests.Timeout, requests.ConnectionError) as exc:
            last_error = exc
            if attempt < retries:
                time.sleep(delay)
                delay *= 2
            continue
        if response.status_code >= 500:
            last_error = GenerationProtocolError(
                f"endpoint returned {response.status_code}: {response.text[:200]}"
            )
            if attempt < retries:
                time.sleep(delay)
                delay *= 2
            continue
        if response.status_code != 200:
            raise GenerationProtocolError(
                f"endpoint rejected the request ({response.status_code}): {response.text[:200]}"
            )
        try:
            payload = response.json()
        except ValueError:
            raise GenerationProtocolError("endpoint response is not JSON")
        if not isinstance(payload, dict) or "generations" not in payload:
            raise GenerationProtocolError("response is missing the 'generations' field")
        generations = payload["generations"]
        if not isinstance(generations, list) or len(generations) != len(batch):
            got = len(generations) if isinstance(generations, list) else "non-list"
            raise GenerationProtocolError(f"endpoint returned {got} generations for {len(batch)} prompts")
        return [str(g) for g in generations]
    raise GenerationProtocolError(f"generation failed after {retries + 1} attempts: {last_error}")


def run_generation(
    prompt_texts: list[str],
    generations_file: str | None = None,
    endpoint: str | None = None,
    batch_size: int = 32,
    parallel: int = 4,
    timeout: float = 30.0,
    retries: int = 2,
) -> list[str]:
    """Produce one generation per prompt.

    File mode passes through a user-supplied generations file after checking
    the line count; endpoint mode POSTs ``{"prompts": [...]}`` batches and
    expects ``{"generations": [...]}`` of equal length.
    """
    if (generations_file is None) == (endpoint is None):
        raise ConfigError("exactly one of generations_file or endpoint is required")
    if generations_file is not None:
        with open(generations_file, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if len(lines) != len(prompt_texts):
            raise GenerationProtocolError(
                f"{generations_file} holds {len(lines)} generations "
                f"for {len(prompt_texts)} prompts"
            )
        return lines
    batches = [prompt_texts[i : i + batch_size] for i in range(0, len(prompt_texts), batch_size)]
    results: list[list[str] | None] = [None] * len(batches)
    if parallel > 1 and len(batches) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=parallel) as pool:
            futures = {
                pool.submit(_post_batch, endpoint, batch, timeout, retries): i
                for i, batch in enumerate(batches)
            }
            for future, i in futures.items():
                results[i] = future.result()
    else:
        for i, batch in enumerate(batches):
            results[i] = _post_batch(endpoint, batch, timeout, retries)
    return [g for batch in results for g in batch]  # type: ignore[union-attr]


@dataclass
class Aggregate:
    mean: float
    std: float
    count: int


def _numeric_leaves(obj, prefix: str, out: dict[str, float]):
    if isinstance(obj, bool):
        return
    if isinstance(obj, (int, float)):
        out[prefix] = float(obj)
    elif isinstance(obj, dict):
        for key in obj:
            _numeric_leaves(obj[key], f"{prefix}.{key}" if prefix else str(key), out)
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            _numeric_leaves(item, f"{prefix}[{i}]", out)


def aggregate_runs(run_reports: list[dict]) -> dict:
    """Mean and population standard deviation of every numeric leaf, keyed
    by its JSON path. Leaves absent from some runs are aggregated over the
    runs that have them."""
    if not run_reports:
        raise ConfigError("no run reports to aggregate")
    collected: dict[str, list[float]] = {}
    for report in run_reports:
        leaves: dict[str, float] = {}
        _numeric_leaves(report, "", leaves)
        for path, value in leaves.items():
            collected.setdefault(path, []).append(value)
    aggregates = {}
    for path in sorted(collected):
        values = np.asarray(collected[path], dtype=np.float64)
        aggregates[path] = {
            "mean": float(values.mean()),
            "std": float(values.std(ddof=0)),
            "count": int(values.size),
        }
    return {"runs": len(run_reports), "aggregates": aggregates}


def load_config_file(path: str) -> dict:
    """Read a TOML or JSON pipeline configuration file."""
    if path.endswith(".toml"):
        try:
            import tomllib  # py311+
        except ModuleNotFoundError:
            import tomli as tomllib
        with open(path, "rb") as fh:
            try:
                return tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: invalid TOML ({exc})")
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})")
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: configuration must be an object")
    return obj
