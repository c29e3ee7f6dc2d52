"""Checksummed on-disk snapshots: everything the service needs, loadable read-only.

Layout: manifest.json (version, per-file sha256, config echo, snapshot id) plus
one file per structure. Vectors are little-endian float32 rows; JSON is written
with sorted keys so identical builds produce identical bytes.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
from pathlib import Path

import numpy as np

from .atlas import MergedAtlas
from .config import EngineConfig
from .engine import Engine
from .errors import IncompatibleSnapshot, SnapshotCorrupt
from .ingest import compute_stats
from .lexical import build_lexical
from .model import Document, SentenceChunk, Topic
from .vindex import build_vector_index

SNAPSHOT_VERSION = 1
_FILES = ("documents.jsonl", "sentences.jsonl", "doc_vectors.f32",
          "sent_vectors.f32", "topics.json", "atlas.json")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def save_snapshot(engine: Engine, directory: str | Path) -> str:
    """Write the engine state; returns the snapshot id."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)

    with open(d / "documents.jsonl", "w", encoding="utf-8") as fh:
        for doc in engine.docs:
            fh.write(_dumps({
                "doc_id": doc.doc_id, "title": doc.title, "abstract": doc.body,
                "pub_date": doc.pub_date.isoformat(), "journal": doc.journal,
                "authors": doc.authors, "topic_id": doc.topic_id,
                "coords": list(doc.coords) if doc.coords else None,
            }) + "\n")
    with open(d / "sentences.jsonl", "w", encoding="utf-8") as fh:
        for c in engine.chunks:
            fh.write(_dumps({"doc_id": c.doc_id, "seq": c.seq, "text": c.text}) + "\n")

    _write_vectors(d / "doc_vectors.f32", [doc.embedding for doc in engine.docs],
                   engine.cfg.embedding_dim)
    _write_vectors(d / "sent_vectors.f32", [c.embedding for c in engine.chunks],
                   engine.cfg.embedding_dim)

    topics_payload = [_topic_to_dict(t) for t in engine.atlas.topics]
    (d / "topics.json").write_text(_dumps(topics_payload), encoding="utf-8")
    (d / "atlas.json").write_text(_dumps({
        "members": {k: sorted(v) for k, v in engine.all_members.items()},
        "leaf_members": {k: sorted(v) for k, v in engine.atlas.members.items()},
        "merge_log": engine.atlas.merge_log,
        "outlier_ids": sorted(engine.atlas.outlier_ids),
    }), encoding="utf-8")

    checksums = {name: _sha256(d / name) for name in _FILES}
    snapshot_id = hashlib.sha256(
        _dumps(checksums).encode("utf-8")).hexdigest()[:16]
    (d / "manifest.json").write_text(_dumps({
        "version": SNAPSHOT_VERSION,
        "files": checksums,
        "config": engine.cfg.to_dict(),
        "snapshot_id": snapshot_id,
    }), encoding="utf-8")
    engine.snapshot_id = snapshot_id
    return snapshot_id


def load_snapshot(directory: str | Path, llm=None, embedder=None) -> Engine:
    d = Path(directory)
    manifest_path = d / "manifest.json"
    if not manifest_path.exists():
        raise SnapshotCorrupt(f"no manifest in {d}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise SnapshotCorrupt(f"unreadable manifest: {exc}") from exc
    if manifest.get("version") != SNAPSHOT_VERSION:
        raise IncompatibleSnapshot(
            f"snapshot version {manifest.get('version')} != {SNAPSHOT_VERSION}")
    for name, expected in manifest["files"].items():
        path = d / name
        if not path.exists():
            raise SnapshotCorrupt(f"missing snapshot file {name}")
        if _sha256(path) != expected:
            raise SnapshotCorrupt(f"checksum mismatch for {name}")

    cfg = EngineConfig.from_dict(manifest["config"])
    docs = []
    with open(d / "documents.jsonl", encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            docs.append(Document(
                doc_id=rec["doc_id"], title=rec["title"], body=rec["abstract"],
                pub_date=dt.date.fromisoformat(rec["pub_date"]),
                journal=rec["journal"], authors=rec["authors"],
                topic_id=rec["topic_id"],
                coords=tuple(rec["coords"]) if rec["coords"] else None,
            ))
    chunks = []
    with open(d / "sentences.jsonl", encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            chunks.append(SentenceChunk(doc_id=rec["doc_id"], seq=rec["seq"],
                                        text=rec["text"]))

    doc_vecs = _read_vectors(d / "doc_vectors.f32", len(docs), cfg.embedding_dim)
    sent_vecs = _read_vectors(d / "sent_vectors.f32", len(chunks), cfg.embedding_dim)
    for doc, v in zip(docs, doc_vecs):
        doc.embedding = v
    for c, v in zip(chunks, sent_vecs):
        c.embedding = v

    atlas_data = json.loads((d / "atlas.json").read_text(encoding="utf-8"))
    atlas = MergedAtlas(
        topics=[_topic_from_dict(t) for t in
                json.loads((d / "topics.json").read_text(encoding="utf-8"))],
        members={k: list(v) for k, v in atlas_data["leaf_members"].items()},
        doc_assignments={doc.doc_id: doc.topic_id for doc in docs if doc.topic_id},
        doc_coords={doc.doc_id: doc.coords for doc in docs if doc.coords},
        merge_log=atlas_data["merge_log"],
        outlier_ids=set(atlas_data["outlier_ids"]),
    )
    atlas.topic_coords = {t.topic_id: t.coords for t in atlas.topics}
    all_members = {k: list(v) for k, v in atlas_data["members"].items()}

    engine = Engine(
        cfg=cfg, docs=docs, chunks=chunks,
        stats=compute_stats(docs, cfg.interval_days),
        lexical=build_lexical(docs),
        doc_vix=build_vector_index(
            [(doc.doc_id, doc.embedding, doc.doc_id, None) for doc in docs],
            cfg.embedding_dim),
        sent_vix=build_vector_index(
            [(c.chunk_id, c.embedding, c.doc_id, c.seq) for c in chunks],
            cfg.embedding_dim),
        atlas=atlas, all_members=all_members,
        llm=llm if llm is not None else _default_llm(),
        embedder=embedder,
        snapshot_id=manifest["snapshot_id"],
    )
    return engine


def _default_llm():
    from .llm import StubLlm
    return StubLlm()


def _write_vectors(path: Path, vectors, dim: int) -> None:
    if vectors:
        arr = np.stack([np.asarray(v, dtype="<f4") for v in vectors])
    else:
        arr = np.zeros((0, dim), dtype="<f4")
    path.write_bytes(arr.tobytes())


def _read_vectors(path: Path, count: int, dim: int) -> list[np.ndarray]:
    raw = path.read_bytes()
    expected = count * dim * 4
    if len(raw) != expected:
        raise SnapshotCorrupt(
            f"{path.name}: expected {expected} bytes, found {len(raw)}")
    arr = np.frombuffer(raw, dtype="<f4").reshape(count, dim)
    return [arr[i].copy() for i in range(count)]


def _topic_to_dict(t: Topic) -> dict:
    return {
        "topic_id": t.topic_id,
        "centroid": [float(x) for x in t.centroid] if t.centroid is not None else None,
        "keywords": [[term, float(w)] for term, w in t.keywords],
        "label": t.label, "description": t.description, "size": t.size,
        "parent_id": t.parent_id, "level": t.level,
        "coords": list(t.coords) if t.coords else None,
        "source_intervals": sorted(t.source_intervals),
    }


def _topic_from_dict(rec: dict) -> Topic:
    return Topic(
        topic_id=rec["topic_id"],
        centroid=np.asarray(rec["centroid"], dtype=np.float64)
        if rec["centroid"] is not None else None,
        keywords=[(term, w) for term, w in rec["keywords"]],
        label=rec["label"], description=rec["description"], size=rec["size"],
        parent_id=rec["parent_id"], level=rec["level"],
        coords=tuple(rec["coords"]) if rec["coords"] else None,
        source_intervals=set(rec["source_intervals"]),
    )
