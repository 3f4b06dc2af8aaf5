"""``bench-adapter``: speak the batch scoring protocol from the command line.

Exit 0 with one JSONL score line per frame on stdout; any failure
(unreadable frame, bad loader, model error) exits nonzero with the
reason on stderr, which the harness surfaces verbatim.
"""

from __future__ import annotations

import argparse
import sys

from .adapter import AdapterConfig, AdapterError, serve_batch

DEFAULT_MODEL = "benchadapter.models:constant_half"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench-adapter",
        description="Score a bench batch file with a Python-loadable model.",
    )
    parser.add_argument("--batch", required=True, help="JSONL batch file from the harness")
    parser.add_argument(
        "--model",
        default=DEFAULT_MODEL,
        help=f"loader reference module.path:callable (default {DEFAULT_MODEL})",
    )
    parser.add_argument("--device", default="cpu", help="device hint passed to the loader")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument(
        "--semantics",
        choices=("p_fake", "p_real"),
        default="p_fake",
        help="what the model's score means; p_real is inverted before emission",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = AdapterConfig(
            loader=args.model,
            device=args.device,
            batch_size=args.batch_size,
            score_semantics=args.semantics,
        )
        serve_batch(args.batch, config)
    except AdapterError as exc:
        print(f"bench-adapter: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
