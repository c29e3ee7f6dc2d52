"""Command-line interface: ingest -> build -> serve/search/qa over a workdir."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
from filelock import FileLock, Timeout

from .config import EngineConfig
from .engine import Engine
from .errors import EngineError
from .ingest import parse_corpus
from .model import Filter, QaRequest


def _load_config(workdir: Path, config_path: str | None) -> EngineConfig:
    if config_path:
        cfg = EngineConfig.from_file(config_path)
        (workdir / "config.json").write_text(
            json.dumps(cfg.to_dict(), indent=2), encoding="utf-8")
        return cfg
    saved = workdir / "config.json"
    if saved.exists():
        return EngineConfig.from_file(saved)
    return EngineConfig()


def _require(path: Path, hint: str) -> Path:
    if not path.exists():
        raise click.UsageError(f"missing {path} - run `corpusatlas {hint}` first")
    return path


@click.group()
def main():
    """Corpus exploration engine."""


@main.command()
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@click.argument("workdir", type=click.Path(file_okay=False))
def ingest(corpus, workdir):
    """Parse and validate CORPUS (JSONL) into WORKDIR."""
    wd = Path(workdir)
    wd.mkdir(parents=True, exist_ok=True)
    with open(corpus, "rb") as fh:
        docs, stats, diags = parse_corpus(fh)
    with open(wd / "ingested.jsonl", "w", encoding="utf-8") as out:
        for d in docs:
            out.write(json.dumps({
                "doc_id": d.doc_id, "title": d.title, "abstract": d.body,
                "pub_date": d.pub_date.isoformat(), "journal": d.journal,
                "authors": d.authors,
            }, sort_keys=True) + "\n")
    click.echo(f"ingested {stats.doc_count} docs, {stats.sentence_count} sentences, "
               f"{stats.interval_count} intervals", err=False)
    if diags.skipped or diags.duplicates:
        click.echo(f"skipped {diags.skipped} malformed, "
                   f"{diags.duplicates} duplicate records", err=True)
        for reason in diags.reasons[:20]:
            click.echo(f"  {reason}", err=True)


@main.command()
@click.argument("workdir", type=click.Path(exists=True, file_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON config file (EngineConfig fields).")
def build(workdir, config_path):
    """Embed, cluster, merge, lay out, and snapshot the ingested corpus."""
    wd = Path(workdir)
    _require(wd / "ingested.jsonl", f"ingest <corpus> {workdir}")
    cfg = _load_config(wd, config_path)
    lock = FileLock(str(wd / ".build.lock"))
    try:
        with lock.acquire(timeout=1):
            with open(wd / "ingested.jsonl", "rb") as fh:
                docs, _stats, _diags = parse_corpus(fh)
            engine = Engine.build(docs, cfg)
            from .snapshot import save_snapshot
            snapshot_id = save_snapshot(engine, wd / "snapshot")
    except Timeout:
        raise click.UsageError(f"another build holds the lock in {workdir}")
    click.echo(f"snapshot {snapshot_id} written to {wd / 'snapshot'}")


def _load_engine(workdir: str) -> Engine:
    wd = Path(workdir)
    _require(wd / "snapshot" / "manifest.json", f"build {workdir}")
    from .snapshot import load_snapshot
    return load_snapshot(wd / "snapshot")


@main.command()
@click.argument("workdir", type=click.Path(exists=True, file_okay=False))
@click.option("--bind", default="127.0.0.1:8765", show_default=True)
def serve(workdir, bind):
    """Serve the built snapshot over HTTP."""
    wd = Path(workdir)
    _require(wd / "snapshot" / "manifest.json", f"build {workdir}")
    from .server import serve as run_server
    run_server(str(wd / "snapshot"), bind=bind)


@main.command()
@click.argument("workdir", type=click.Path(exists=True, file_okay=False))
@click.option("-q", "--query", required=True)
@click.option("--mode", type=click.Choice(["lexical", "semantic"]), default="lexical",
              show_default=True)
@click.option("--field", "field_name", type=click.Choice(["body", "title"]),
              default="body", show_default=True)
@click.option("-k", default=10, show_default=True)
@click.option("--filter", "filter_json", default=None, help="JSON filter object.")
def search(workdir, query, mode, field_name, k, filter_json):
    """Search the built snapshot offline."""
    engine = _load_engine(workdir)
    flt = Filter.from_dict(json.loads(filter_json)) if filter_json else Filter()
    hits = engine.search(query, mode=mode, field_name=field_name, flt=flt, k=k)
    for h in hits:
        meta = engine.doc_metadata(h.doc_id)
        click.echo(f"{h.rank:3d}. {h.doc_id}  {h.score:.4f}  {meta['title']}")
    if not hits:
        click.echo("no results")


@main.command()
@click.argument("workdir", type=click.Path(exists=True, file_okay=False))
@click.option("--mode", type=click.Choice(["corpus", "document"]), required=True)
@click.option("-q", "--query", required=True)
@click.option("--filter", "filter_json", default=None, help="JSON filter object.")
@click.option("--topics", "topics_csv", default=None, help="Comma-separated topic ids.")
def qa(workdir, mode, query, filter_json, topics_csv):
    """Ask a corpus- or document-level question."""
    engine = _load_engine(workdir)
    flt = Filter.from_dict(json.loads(filter_json)) if filter_json else Filter()
    topic_ids = frozenset(topics_csv.split(",")) if topics_csv else None
    answer = engine.qa(QaRequest(mode=mode, query=query, filter=flt, topic_ids=topic_ids))
    click.echo(answer.text)
    click.echo(f"citations: {', '.join(answer.citations)}")
    if answer.degraded:
        click.echo("(degraded: stub fallback used)", err=True)


def entrypoint() -> None:
    try:
        main(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    except EngineError as exc:
        click.echo(f"engine error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    entrypoint()
