"""Command-line entry point.

Subcommands: ingest, rebuild, eval (auroc | holdout), serve, update-loop.
Exit codes: 0 success, 1 data error (logged as a JSON line on stderr),
2 usage error (from argument parsing).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date, datetime

from .errors import ConfigError, LitgraphError
from .pipeline import (
    JsonLogger,
    Resources,
    cmd_eval_auroc,
    cmd_eval_holdout,
    cmd_ingest,
    cmd_rebuild,
    load_pipeline_config,
    make_update_runner,
    run_update_loop,
)
from .store import load_snapshot


def _add_common(parser: argparse.ArgumentParser, update_dir: bool = False) -> None:
    parser.add_argument("--data-dir", required=True,
                        help="store directory (log, generations, MANIFEST)")
    parser.add_argument("--lexicon", required=True,
                        help="concept lexicon, JSON lines")
    parser.add_argument("--stoplist", default=None,
                        help="banned surface forms, one per line")
    parser.add_argument("--species", default=None,
                        help="species lexicon, JSON lines (bundled default if omitted)")
    parser.add_argument("--config", default=None,
                        help="JSON file with walk/sgns overrides and update schedule")
    if update_dir:
        parser.add_argument("--update-dir", required=True,
                            help="directory of incoming article files")


def _parse_today(value: str) -> date:
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a YYYY-MM-DD date: {value!r}")


def _parse_cutoff(value: str) -> date:
    return _parse_today(value)


def _parse_listen(value: str) -> tuple[str, int]:
    host, sep, port = value.rpartition(":")
    if not sep or not host:
        raise argparse.ArgumentTypeError(
            f"--listen must look like HOST:PORT, got {value!r}")
    try:
        return host, int(port)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad port in {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litgraph",
        description="Concept co-occurrence knowledge engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="process pending update files")
    _add_common(p_ingest, update_dir=True)
    p_ingest.add_argument("--today", type=_parse_today, default=None,
                          help="extraction date override (YYYY-MM-DD)")
    p_ingest.set_defaults(handler=_run_ingest)

    p_rebuild = sub.add_parser("rebuild",
                               help="build graph + embedding, publish snapshot")
    _add_common(p_rebuild)
    p_rebuild.set_defaults(handler=_run_rebuild)

    p_eval = sub.add_parser("eval", help="run an evaluation")
    eval_sub = p_eval.add_subparsers(dest="evaluation", required=True)

    p_auroc = eval_sub.add_parser("auroc", help="link-prediction AUROC")
    _add_common(p_auroc)
    p_auroc.add_argument("--negative-ratio", type=float, default=1.0)
    p_auroc.add_argument("--seed", type=int, default=0)
    p_auroc.add_argument("--holdout-edges", type=float, default=0.0,
                         help="fraction of edges removed from training and "
                              "used as the positive class")
    p_auroc.add_argument("--out-json", default=None)
    p_auroc.add_argument("--out-csv", default=None,
                         help="ROC curve points (threshold, fpr, tpr)")
    p_auroc.set_defaults(handler=_run_eval_auroc)

    p_hold = eval_sub.add_parser("holdout", help="temporal relation prediction")
    _add_common(p_hold)
    p_hold.add_argument("--cutoff", type=_parse_cutoff, required=True,
                        help="train on triples published on or before this date")
    p_hold.add_argument("--k", type=int, default=40)
    p_hold.add_argument("--out-json", default=None)
    p_hold.set_defaults(handler=_run_eval_holdout)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    _add_common(p_serve)
    p_serve.add_argument("--listen", type=_parse_listen, default=("127.0.0.1", 8080),
                         help="ADDR:PORT to bind (default 127.0.0.1:8080)")
    p_serve.add_argument("--update-dir", default=None,
                         help="enables POST /v1/admin/update when given")
    p_serve.set_defaults(handler=_run_serve)

    p_loop = sub.add_parser("update-loop",
                            help="scheduled ingest + rebuild, runs forever")
    _add_common(p_loop, update_dir=True)
    p_loop.add_argument("--max-ticks", type=int, default=None,
                        help="stop after this many ticks (default: run forever)")
    p_loop.set_defaults(handler=_run_update_loop)

    return parser


def _resources(args) -> Resources:
    return Resources.load(args.lexicon, args.stoplist, args.species)


def _run_ingest(args) -> int:
    today = args.today if args.today is not None else date.today()
    cmd_ingest(args.data_dir, args.update_dir, _resources(args), today,
               JsonLogger())
    return 0


def _run_rebuild(args) -> int:
    cfg = load_pipeline_config(args.config)
    cmd_rebuild(args.data_dir, _resources(args), cfg.walk, cfg.sgns, JsonLogger())
    return 0


def _run_eval_auroc(args) -> int:
    cfg = load_pipeline_config(args.config)
    if not 0.0 <= args.holdout_edges < 1.0:
        raise ConfigError("--holdout-edges must be in [0, 1)")
    cmd_eval_auroc(args.data_dir, _resources(args), cfg.walk, cfg.sgns,
                   args.negative_ratio, args.seed, args.holdout_edges,
                   args.out_json, args.out_csv, JsonLogger())
    return 0


def _run_eval_holdout(args) -> int:
    cfg = load_pipeline_config(args.config)
    cmd_eval_holdout(args.data_dir, _resources(args), args.cutoff,
                     cfg.walk, cfg.sgns, args.k, args.out_json, JsonLogger())
    return 0


def _run_serve(args) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    cfg = load_pipeline_config(args.config)
    resources = _resources(args)
    logger = JsonLogger()
    snapshot = load_snapshot(args.data_dir, categories=resources.categories)
    update_runner = None
    if args.update_dir is not None:
        update_runner = make_update_runner(args.data_dir, args.update_dir,
                                           resources, cfg.walk, cfg.sgns, logger)
    state = ServiceState(resources.lexicon, snapshot, update_runner)
    host, port = args.listen
    logger.log("serving", host=host, port=port,
               snapshot_id=snapshot.snapshot_id)
    uvicorn.run(create_app(state), host=host, port=port, log_level="warning")
    return 0


def _run_update_loop(args) -> int:
    cfg = load_pipeline_config(args.config)
    run_update_loop(args.data_dir, args.update_dir, _resources(args), cfg,
                    JsonLogger(), clock=datetime.now,
                    max_ticks=args.max_ticks)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except LitgraphError as exc:
        sys.stderr.write(json.dumps(
            {"event": "error", "type": type(exc).__name__,
             "message": str(exc)}, sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
