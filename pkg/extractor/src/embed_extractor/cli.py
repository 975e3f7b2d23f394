"""CLI: embed / finetune-embed / score."""

from __future__ import annotations

import argparse
import json
import sys

from .embed import ExtractorConfig, embed_file, finetune_then_embed
from .errors import ExtractorError
from .score import score_logprobs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embed-extract",
        description="Sentence embeddings (EMB1) and token log-probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--model", required=True,
                       help="model identifier/path, or toy:<width> / toy-causal:<width>")
        p.add_argument("--in", dest="input", required=True, help="one sentence per line")
        p.add_argument("--out", dest="output", required=True)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("embed", help="mean-pooled sentence embeddings to EMB1")
    common(p)
    p.add_argument("--batch-size", type=int, default=16)

    p = sub.add_parser("finetune-embed", help="fine-tune on a corpus, then embed")
    common(p)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--finetune-corpus", required=True, help="training text, one sentence per line")
    p.add_argument("--iterations", type=int, default=100)

    p = sub.add_parser("score", help="teacher-forced token log-probabilities to JSONL")
    common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        import transformers

        transformers.logging.set_verbosity_error()
        if args.command == "embed":
            embed_file(ExtractorConfig(
                model=args.model,
                input_path=args.input,
                output_path=args.output,
                batch_size=args.batch_size,
                seed=args.seed,
            ))
        elif args.command == "finetune-embed":
            finetune_then_embed(ExtractorConfig(
                model=args.model,
                input_path=args.input,
                output_path=args.output,
                finetune_corpus=args.finetune_corpus,
                finetune_iterations=args.iterations,
                batch_size=args.batch_size,
                seed=args.seed,
            ))
        else:
            score_logprobs(args.model, args.input, args.output, seed=args.seed)
        return 0
    except ExtractorError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(json.dumps({"error": "file_not_found", "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
