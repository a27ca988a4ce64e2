"""Lifecycle orchestration: ingest update files, rebuild the snapshot,
run evaluations, and drive the scheduled update loop.

One pipeline instance owns the writer role for a data directory via an
exclusive lock file; HTTP readers are unaffected because they only ever
see published generations.  All progress and errors are logged as
line-delimited JSON.  The update loop takes an injectable clock and
sleeper so schedules can be driven by tests.
"""

from __future__ import annotations

import fcntl
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timedelta
from typing import Callable, Optional

from .corpus import (
    append_ledger,
    parse_article_file,
    pending_update_files,
    read_ledger,
)
from .errors import ConfigError, CorpusFormatError, InsufficientDataError
from .evaluation import (
    AurocReport,
    HoldoutReport,
    auroc_link_prediction,
    temporal_holdout,
    write_auroc_json,
    write_holdout_json,
    write_roc_csv,
)
from .extractor import SpeciesLexicon, extract_relations
from .graph import build_graph, graph_from_weighted_pairs
from .lexicon import (
    Lexicon,
    SurfaceIndex,
    compile_surface_index,
    load_lexicon,
    load_stoplist,
)
from .rng import SplitMix64, mix64
from .sgns import SGNSConfig, train_embeddings
from .store import SnapshotView, Store
from .walks import WalkConfig, generate_walks

LEDGER_NAME = "ingested.files"
LOCK_NAME = ".writer.lock"
_EDGE_HOLDOUT_TAG = 0x31


@dataclass(frozen=True)
class PipelineConfig:
    walk: WalkConfig = field(default_factory=WalkConfig)
    sgns: SGNSConfig = field(default_factory=SGNSConfig)
    schedule: str = "30 0 * * *"


def load_pipeline_config(path: Optional[str]) -> PipelineConfig:
    """Read walk/training overrides and the update schedule from a JSON
    file; missing file path means all defaults."""
    if path is None:
        return PipelineConfig()
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {"walk", "sgns", "schedule"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = PipelineConfig()
    try:
        if "walk" in raw:
            cfg = replace(cfg, walk=replace(cfg.walk, **raw["walk"]))
        if "sgns" in raw:
            cfg = replace(cfg, sgns=replace(cfg.sgns, **raw["sgns"]))
    except TypeError as exc:
        raise ConfigError(f"bad config field: {exc}") from None
    if "schedule" in raw:
        cfg = replace(cfg, schedule=str(raw["schedule"]))
    parse_schedule(cfg.schedule)
    cfg.walk.validate()
    cfg.sgns.validate()
    return cfg


class JsonLogger:
    """Line-delimited JSON event log."""

    def __init__(self, stream=None, clock: Callable[[], float] = time.time):
        self.stream = stream if stream is not None else sys.stderr
        self.clock = clock

    def log(self, event: str, **fields) -> None:
        record = {"event": event, "ts": round(self.clock(), 3)}
        record.update(fields)
        self.stream.write(json.dumps(record, sort_keys=True, default=str) + "\n")
        self.stream.flush()


class WriterLock:
    """Exclusive advisory lock marking the single store writer."""

    def __init__(self, data_dir):
        os.makedirs(str(data_dir), exist_ok=True)
        self.path = os.path.join(str(data_dir), LOCK_NAME)
        self._fh = None

    def __enter__(self):
        self._fh = open(self.path, "w")
        try:
            fcntl.flock(self._fh.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            self._fh.close()
            self._fh = None
            raise ConfigError(
                f"another pipeline instance holds the writer lock {self.path}")
        return self

    def __exit__(self, *exc_info):
        if self._fh is not None:
            fcntl.flock(self._fh.fileno(), fcntl.LOCK_UN)
            self._fh.close()
            self._fh = None


@dataclass
class Resources:
    """Parsed lexica shared by every pipeline command."""

    lexicon: Lexicon
    index: SurfaceIndex
    species: SpeciesLexicon
    categories: dict

    @classmethod
    def load(cls, lexicon_path, stoplist_path=None, species_path=None) -> "Resources":
        try:
            stoplist = frozenset()
            if stoplist_path is not None:
                with open(stoplist_path, "r", encoding="utf-8") as fh:
                    stoplist = load_stoplist(fh)
            with open(lexicon_path, "r", encoding="utf-8") as fh:
                lexicon = load_lexicon(fh, stoplist=stoplist)
            if species_path is not None:
                with open(species_path, "r", encoding="utf-8") as fh:
                    species = SpeciesLexicon.load(fh)
            else:
                species = SpeciesLexicon.default()
        except OSError as exc:
            raise ConfigError(f"cannot read resource file: {exc}") from None
        categories = {e.concept_id: e.category.value for e in lexicon.entries}
        return cls(lexicon=lexicon, index=compile_surface_index(lexicon),
                   species=species, categories=categories)


def cmd_ingest(data_dir, update_dir, resources: Resources,
               extraction_date: date, logger: JsonLogger) -> dict:
    """Process every update file not yet in the ledger, oldest name first.

    A file is recorded in the ledger only after all its articles are
    stored, so a crash mid-file re-processes that file on the next run;
    re-processing is harmless because article revision is idempotent.
    """
    ledger_path = os.path.join(str(data_dir), LEDGER_NAME)
    processed = read_ledger(ledger_path)
    pending = pending_update_files(update_dir, processed)
    report = {"files_processed": 0, "files_failed": 0, "articles": 0,
              "triples_inserted": 0, "triples_deduplicated": 0,
              "articles_replaced": 0, "records_skipped": 0}
    with WriterLock(data_dir):
        store = Store.open(data_dir, categories=resources.categories)
        try:
            for name in pending:
                path = os.path.join(str(update_dir), name)
                try:
                    with open(path, "rb") as fh:
                        batch = parse_article_file(fh, name, extraction_date)
                except CorpusFormatError as exc:
                    logger.log("ingest_file_failed", file=name, error=str(exc))
                    report["files_failed"] += 1
                    continue
                for record in batch.records:
                    triples = extract_relations(record, resources.index,
                                                resources.species,
                                                extraction_date)
                    result = store.ingest_article(record.article_id, triples,
                                                  sync=False)
                    report["triples_inserted"] += result.inserted
                    report["triples_deduplicated"] += result.deduplicated
                    report["articles_replaced"] += result.articles_replaced
                store.sync()
                append_ledger(ledger_path, name)
                report["files_processed"] += 1
                report["articles"] += batch.record_count
                report["records_skipped"] += batch.skipped_count
                logger.log("ingest_file_done", file=name,
                           articles=batch.record_count,
                           skipped=batch.skipped_count)
        finally:
            store.close()
    logger.log("ingest_done", **report)
    return report


def build_and_publish(store: Store, walk_cfg: WalkConfig,
                      sgns_cfg: SGNSConfig) -> SnapshotView:
    """Graph, walks, training, snapshot publish, in that order."""
    if store.triple_count == 0:
        raise InsufficientDataError("store holds no triples; ingest first")
    graph = build_graph(store)
    walks = generate_walks(graph, walk_cfg)
    model = train_embeddings(walks, sgns_cfg)
    return store.publish_snapshot(embedding=model, graph=graph)


def cmd_rebuild(data_dir, resources: Resources, walk_cfg: WalkConfig,
                sgns_cfg: SGNSConfig, logger: JsonLogger) -> int:
    with WriterLock(data_dir):
        store = Store.open(data_dir, categories=resources.categories)
        try:
            snapshot = build_and_publish(store, walk_cfg, sgns_cfg)
        finally:
            store.close()
    logger.log("rebuild_done", snapshot_id=snapshot.snapshot_id,
               concepts=snapshot.concept_count,
               relations=snapshot.relation_count,
               triples=snapshot.triple_count)
    return snapshot.snapshot_id


def make_update_runner(data_dir, update_dir, resources: Resources,
                       walk_cfg: WalkConfig, sgns_cfg: SGNSConfig,
                       logger: JsonLogger,
                       today: Callable[[], date] = date.today):
    """Callable the HTTP service runs on POST /v1/admin/update."""

    def run() -> SnapshotView:
        cmd_ingest(data_dir, update_dir, resources, today(), logger)
        with WriterLock(data_dir):
            store = Store.open(data_dir, categories=resources.categories)
            try:
                return build_and_publish(store, walk_cfg, sgns_cfg)
            finally:
                store.close()

    return run


def cmd_eval_auroc(data_dir, resources: Resources, walk_cfg: WalkConfig,
                   sgns_cfg: SGNSConfig, negative_ratio: float, seed: int,
                   holdout_fraction: float, out_json, out_csv,
                   logger: JsonLogger) -> AurocReport:
    """AUROC of embedding cosine as an edge predictor.

    With holdout_fraction > 0, that share of edges is removed before
    training and forms the positive class; otherwise the model is
    trained and evaluated on the full graph.
    """
    store = Store.open(data_dir, categories=resources.categories)
    try:
        full_graph = build_graph(store)
        if full_graph.edge_count < 2:
            raise InsufficientDataError("need at least 2 edges to evaluate")
        if holdout_fraction > 0.0:
            edges = sorted(
                (full_graph.nodes[i], full_graph.nodes[int(j)],
                 full_graph.weights[i][pos])
                for i in range(full_graph.node_count)
                for pos, j in enumerate(full_graph.neighbors[i]) if i < j)
            rng = SplitMix64(mix64(seed, _EDGE_HOLDOUT_TAG))
            rng.shuffle(edges)
            n_held = max(1, math.ceil(holdout_fraction * len(edges)))
            if n_held >= len(edges):
                raise InsufficientDataError("holdout fraction leaves no training edges")
            held, training = edges[:n_held], edges[n_held:]
            train_graph = graph_from_weighted_pairs(training)
            model = train_embeddings(generate_walks(train_graph, walk_cfg), sgns_cfg)
            # Score over the full adjacency restricted to embedded nodes.
            score_graph = build_graph(store, node_whitelist=model.names)
            positives = [
                (score_graph.index[a], score_graph.index[b])
                for a, b, _ in held
                if a in score_graph.index and b in score_graph.index]
            if not positives:
                raise InsufficientDataError("no held-out edge is scorable")
            report = auroc_link_prediction(score_graph, model, negative_ratio,
                                           seed, positive_pairs=positives)
        else:
            model = train_embeddings(generate_walks(full_graph, walk_cfg), sgns_cfg)
            report = auroc_link_prediction(full_graph, model, negative_ratio, seed)
    finally:
        store.close()
    if out_json:
        with open(out_json, "w", encoding="utf-8") as fh:
            write_auroc_json(report, fh)
    if out_csv:
        with open(out_csv, "w", encoding="utf-8", newline="") as fh:
            write_roc_csv(report, fh)
    logger.log("eval_auroc_done", auroc=report.auroc,
               positives=report.positives, negatives=report.negatives)
    return report


def cmd_eval_holdout(data_dir, resources: Resources, cutoff: date,
                     walk_cfg: WalkConfig, sgns_cfg: SGNSConfig, k: int,
                     out_json, logger: JsonLogger) -> HoldoutReport:
    store = Store.open(data_dir, categories=resources.categories)
    try:
        report = temporal_holdout(store, cutoff, walk_cfg, sgns_cfg, k)
    finally:
        store.close()
    if out_json:
        with open(out_json, "w", encoding="utf-8") as fh:
            write_holdout_json(report, fh)
    logger.log("eval_holdout_done", cutoff=cutoff.isoformat(),
               new_relations_total=report.new_relations_total,
               predicted=sum(report.rank_histogram),
               unpredictable=report.unpredictable,
               excluded=report.excluded_unseen_concept)
    return report


# -- schedule ------------------------------------------------------------

def parse_schedule(schedule: str) -> tuple:
    """Five cron-style fields (minute hour day month weekday), each '*'
    or an integer; weekday 0 is Sunday."""
    parts = schedule.split()
    if len(parts) != 5:
        raise ConfigError(f"schedule needs 5 fields, got {schedule!r}")
    limits = ((0, 59), (0, 23), (1, 31), (1, 12), (0, 6))
    parsed = []
    for text, (lo, hi) in zip(parts, limits):
        if text == "*":
            parsed.append(None)
            continue
        try:
            value = int(text)
        except ValueError:
            raise ConfigError(f"bad schedule field {text!r}") from None
        if not lo <= value <= hi:
            raise ConfigError(f"schedule field {text!r} out of range [{lo},{hi}]")
        parsed.append(value)
    return tuple(parsed)


def next_fire(after: datetime, schedule: str) -> datetime:
    """First matching minute strictly after the given moment."""
    minute, hour, day, month, weekday = parse_schedule(schedule)
    tick = after.replace(second=0, microsecond=0) + timedelta(minutes=1)
    for _ in range(366 * 24 * 60):
        cron_weekday = (tick.weekday() + 1) % 7  # Monday=0 -> Sunday=0 convention
        if ((minute is None or tick.minute == minute)
                and (hour is None or tick.hour == hour)
                and (day is None or tick.day == day)
                and (month is None or tick.month == month)
                and (weekday is None or cron_weekday == weekday)):
            return tick
        tick += timedelta(minutes=1)
    raise ConfigError(f"schedule {schedule!r} never fires")


def run_update_loop(data_dir, update_dir, resources: Resources,
                    config: PipelineConfig, logger: JsonLogger,
                    clock: Callable[[], datetime] = datetime.now,
                    sleeper: Callable[[float], None] = time.sleep,
                    max_ticks: Optional[int] = None,
                    today: Callable[[], date] = date.today) -> int:
    """Run ingest + rebuild at every schedule tick; never raises.

    Ticks that pass while an update is still running are skipped (with a
    log record), not queued.  ``max_ticks`` bounds the loop for tests; a
    production run passes None and loops forever.
    """
    ticks_run = 0
    tick = next_fire(clock(), config.schedule)
    logger.log("update_loop_started", schedule=config.schedule,
               first_tick=tick.isoformat())
    while max_ticks is None or ticks_run < max_ticks:
        now = clock()
        if now < tick:
            sleeper(min((tick - now).total_seconds(), 60.0))
            continue
        logger.log("update_tick", tick=tick.isoformat())
        try:
            cmd_ingest(data_dir, update_dir, resources, today(), logger)
            cmd_rebuild(data_dir, resources, config.walk, config.sgns, logger)
        except Exception as exc:
            logger.log("update_failed", tick=tick.isoformat(), error=repr(exc))
        ticks_run += 1
        finished = clock()
        skipped = 0
        tick = next_fire(tick, config.schedule)
        while tick <= finished:
            skipped += 1
            tick = next_fire(tick, config.schedule)
        if skipped:
            logger.log("ticks_skipped", count=skipped,
                       next_tick=tick.isoformat())
    return ticks_run
