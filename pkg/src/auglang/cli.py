"""Command-line interface wiring the pipeline stages together.

Every subcommand reads and writes plain files, exits 0 on success, and
prints a machine-readable ``{"error", "message"}`` JSON object to stderr
on failure. A TOML/JSON config file may supply defaults per subcommand
(section named like the subcommand, underscores for hyphens); explicit
flags always win.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import corpus as corpus_io
from .codec import validate_example
from .conditioning import MODES, MaskPolicy, build_requests, read_prompts, write_prompts
from .errors import ConfigError, ToolkitError
from .genfilter import filter_generations
from .metrics import metric_report, read_emb1, read_logprobs
from .mixoutlab import run_verification
from .pipeline import (
    aggregate_runs,
    assemble_augmented_set,
    load_config_file,
    run_generation,
    subsample_per_intent,
)


def _read_token_lines(path: str) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        return [line.split() for line in fh.read().splitlines() if line.strip()]


def _write_json(path: str | None, obj: dict) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            flag = "--" + name.replace("_", "-")
            raise ConfigError(f"{args.command}: {flag} is required (flag or config file)")


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if not args.config:
        return args
    config = load_config_file(args.config)
    section = config.get(args.command.replace("-", "_"), {})
    if not isinstance(section, dict):
        raise ConfigError(f"config section {args.command!r} must be a table/object")
    for key, value in section.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"config key {key!r} is not an option of {args.command}")
        if getattr(args, attr) is None:
            setattr(args, attr, value)
    return args


def _schema_for(args: argparse.Namespace, fallback_corpus: str | None = None):
    source = args.schema_from or fallback_corpus
    if source is None:
        raise ConfigError(f"{args.command}: --schema-from is required")
    return corpus_io.schema_from_file(source)


def cmd_subsample(args) -> int:
    _require(args, "input", "ratio", "output")
    seed = 0 if args.seed is None else int(args.seed)
    examples = corpus_io.read_corpus(args.input, args.input_format)
    kept = subsample_per_intent(examples, float(args.ratio), seed)
    corpus_io.write_corpus(args.output, kept, fmt=args.output_format)
    return 0


def _policy_from(args) -> MaskPolicy:
    defaults = MaskPolicy()
    return MaskPolicy(
        word_mask_rate=defaults.word_mask_rate if args.mask_rate is None else float(args.mask_rate),
        span_len_min=defaults.span_len_min if args.span_len_min is None else int(args.span_len_min),
        span_len_max=defaults.span_len_max if args.span_len_max is None else int(args.span_len_max),
        num_spans_min=defaults.num_spans_min if args.num_spans_min is None else int(args.num_spans_min),
        num_spans_max=defaults.num_spans_max if args.num_spans_max is None else int(args.num_spans_max),
        sentinel=defaults.sentinel if args.sentinel is None else args.sentinel,
    )


def cmd_prompts(args) -> int:
    _require(args, "input", "mode", "count_per_intent", "output")
    seed = 0 if args.seed is None else int(args.seed)
    examples = corpus_io.read_corpus(args.input, args.input_format)
    schema = _schema_for(args, fallback_corpus=args.input)
    if args.repair:
        examples = [validate_example(ex, schema, repair=True) for ex in examples]
    prompts = build_requests(
        examples, schema, args.mode, int(args.count_per_intent), _policy_from(args), seed
    )
    write_prompts(args.output, prompts)
    return 0


def cmd_generate(args) -> int:
    _require(args, "prompts", "output")
    prompts = read_prompts(args.prompts)
    generations = run_generation(
        [p.text for p in prompts],
        generations_file=args.generations_file,
        endpoint=args.endpoint,
        batch_size=32 if args.batch_size is None else int(args.batch_size),
        parallel=4 if args.parallel is None else int(args.parallel),
        timeout=30.0 if args.timeout is None else float(args.timeout),
        retries=2 if args.retries is None else int(args.retries),
    )
    with open(args.output, "w", encoding="utf-8") as fh:
        for line in generations:
            fh.write(line + "\n")
    return 0


def cmd_filter(args) -> int:
    _require(args, "input", "schema_from", "output")
    schema = _schema_for(args)
    with open(args.input, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    dedup_against = None
    if args.dedup_training:
        dedup_against = corpus_io.read_corpus(args.dedup_training)
    report = filter_generations(
        lines, schema, dedup_against=dedup_against, dedup_exact=bool(args.dedup_exact)
    )
    corpus_io.write_corpus(args.output, report.accepted, fmt=args.output_format)
    if args.report:
        _write_json(args.report, report.to_dict())
    return 0


def cmd_assemble(args) -> int:
    _require(args, "real", "synthetic", "output")
    schema = _schema_for(args, fallback_corpus=args.real)
    real = corpus_io.read_corpus(args.real)
    synthetic = corpus_io.read_corpus(args.synthetic)
    if args.repair:
        real = [validate_example(ex, schema, repair=True) for ex in real]
        synthetic = [validate_example(ex, schema, repair=True) for ex in synthetic]
    examples, meta = assemble_augmented_set(real, synthetic, schema)
    corpus_io.write_corpus(args.output, examples, meta=meta, fmt=args.output_format)
    return 0


def cmd_metrics(args) -> int:
    real_tokens = _read_token_lines(args.real_text) if args.real_text else None
    fake_tokens = _read_token_lines(args.fake_text) if args.fake_text else None
    logprobs_real = read_logprobs(args.logprobs_real) if args.logprobs_real else None
    logprobs_fake = read_logprobs(args.logprobs_fake) if args.logprobs_fake else None
    embeddings = {}
    for name, real_path, fake_path in args.emb or ():
        embeddings[name] = (read_emb1(real_path), read_emb1(fake_path))
    report = metric_report(
        real_tokens=real_tokens,
        fake_tokens=fake_tokens,
        embeddings=embeddings,
        logprobs_real=logprobs_real,
        logprobs_fake=logprobs_fake,
        num_clusters=20 if args.clusters is None else int(args.clusters),
        num_ratios=1001 if args.ratios is None else int(args.ratios),
        seed=0 if args.seed is None else int(args.seed),
        bleu_mode=args.bleu_mode or "corpus",
    )
    _write_json(args.output, report.to_dict())
    return 0


def cmd_mixout_verify(args) -> int:
    report = run_verification(
        seed=0 if args.seed is None else int(args.seed),
        include_equivalence=not args.quick,
    )
    _write_json(args.output, report)
    return 0 if report["all_passed"] else 1


def cmd_report(args) -> int:
    _require(args, "runs")
    reports = []
    for path in args.runs:
        with open(path, encoding="utf-8") as fh:
            reports.append(json.load(fh))
    _write_json(args.output, aggregate_runs(reports))
    return 0


HANDLERS = {
    "subsample": cmd_subsample,
    "prompts": cmd_prompts,
    "generate": cmd_generate,
    "filter": cmd_filter,
    "assemble": cmd_assemble,
    "metrics": cmd_metrics,
    "mixout-verify": cmd_mixout_verify,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auglang",
        description="Slot/intent augmentation pipeline: prompts, filtering, metrics.",
    )
    parser.add_argument("--config", help="TOML/JSON config file with per-subcommand sections")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("subsample", help="per-intent ratio subsampling of a corpus")
    p.add_argument("--in", dest="input", help="input corpus (CoNLL or JSONL)")
    p.add_argument("--ratio", type=float, help="per-intent sampling ratio in (0, 1]")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", dest="output", help="output corpus path")
    p.add_argument("--in-format", dest="input_format", choices=("conll", "jsonl"))
    p.add_argument("--out-format", dest="output_format", choices=("conll", "jsonl"))

    p = sub.add_parser("prompts", help="build generator conditioning prompts")
    p.add_argument("--in", dest="input", help="training corpus")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--count-per-intent", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", dest="output", help="prompt JSONL path")
    p.add_argument("--in-format", dest="input_format", choices=("conll", "jsonl"))
    p.add_argument("--schema-from", help="corpus or schema JSON defining the label sets")
    p.add_argument("--repair", action="store_true", help="promote stray I- tags to B-")
    p.add_argument("--mask-rate", type=float)
    p.add_argument("--span-len-min", type=int)
    p.add_argument("--span-len-max", type=int)
    p.add_argument("--num-spans-min", type=int)
    p.add_argument("--num-spans-max", type=int)
    p.add_argument("--sentinel")

    p = sub.add_parser("generate", help="run prompts through a generator")
    p.add_argument("--prompts", help="prompt JSONL from the prompts stage")
    p.add_argument("--generations-file", help="file mode: pre-computed generations, one per line")
    p.add_argument("--endpoint", help="endpoint mode: HTTP URL accepting prompt batches")
    p.add_argument("--batch-size", type=int)
    p.add_argument("--parallel", type=int)
    p.add_argument("--timeout", type=float)
    p.add_argument("--retries", type=int)
    p.add_argument("--out", dest="output", help="raw generations path")

    p = sub.add_parser("filter", help="decode generations, drop invalid ones")
    p.add_argument("--in", dest="input", help="raw generations, one per line")
    p.add_argument("--schema-from", help="corpus or schema JSON defining the label sets")
    p.add_argument("--out", dest="output", help="accepted corpus path")
    p.add_argument("--out-format", dest="output_format", choices=("conll", "jsonl"))
    p.add_argument("--report", help="rejection-count JSON path")
    p.add_argument("--dedup-training", help="reject exact duplicates of this corpus")
    p.add_argument("--dedup-exact", action="store_true", help="reject repeats within generations")

    p = sub.add_parser("assemble", help="concatenate real and synthetic corpora")
    p.add_argument("--real")
    p.add_argument("--synthetic")
    p.add_argument("--schema-from")
    p.add_argument("--out", dest="output")
    p.add_argument("--out-format", dest="output_format", choices=("conll", "jsonl"))
    p.add_argument("--repair", action="store_true")

    p = sub.add_parser("metrics", help="generation-quality metric report")
    p.add_argument("--real-text", help="real sentences, one per line, whitespace-tokenized")
    p.add_argument("--fake-text", help="generated sentences, one per line")
    p.add_argument("--logprobs-real", help="logprob JSONL for the real sentences")
    p.add_argument("--logprobs-fake", help="logprob JSONL for the generated sentences")
    p.add_argument(
        "--emb",
        nargs=3,
        action="append",
        metavar=("NAME", "REAL", "FAKE"),
        help="named EMB1 pair; may repeat (e.g. plain/aug/ft_aug)",
    )
    p.add_argument("--clusters", type=int)
    p.add_argument("--ratios", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--bleu-mode", choices=("corpus", "sentence"))
    p.add_argument("--out", dest="output", help="report JSON path (stdout if omitted)")

    p = sub.add_parser("mixout-verify", help="numerical verification report")
    p.add_argument("--seed", type=int)
    p.add_argument("--quick", action="store_true", help="skip the slow training equivalence checks")
    p.add_argument("--out", dest="output", help="report JSON path (stdout if omitted)")

    p = sub.add_parser("report", help="aggregate per-seed run reports")
    p.add_argument("--runs", nargs="+", help="run report JSON files")
    p.add_argument("--out", dest="output", help="aggregate JSON path (stdout if omitted)")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args = _merge_config(args)
        return HANDLERS[args.command](args)
    except ToolkitError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(json.dumps({"error": "file_not_found", "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
