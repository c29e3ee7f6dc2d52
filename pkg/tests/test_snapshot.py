import json

import pytest

from corpusatlas.config import EngineConfig
from corpusatlas.engine import Engine
from corpusatlas.errors import IncompatibleSnapshot, SnapshotCorrupt
from corpusatlas.model import EMPTY_FILTER, Filter, QaRequest
from corpusatlas.snapshot import load_snapshot, save_snapshot

from conftest import make_corpus

CFG = EngineConfig(embedding_dim=32, min_cluster_size=5, min_samples=3)


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    docs = make_corpus(n_docs=90, span_days=40, seed=11)
    engine = Engine.build(docs, CFG)
    path = tmp_path_factory.mktemp("snap") / "s1"
    snapshot_id = save_snapshot(engine, path)
    return engine, path, snapshot_id


class TestRoundTrip:
    def test_snapshot_id_stable(self, built):
        engine, path, snapshot_id = built
        assert engine.snapshot_id == snapshot_id
        assert len(snapshot_id) == 16

    def test_rebuild_is_byte_identical(self, built, tmp_path):
        docs = make_corpus(n_docs=90, span_days=40, seed=11)
        engine2 = Engine.build(docs, CFG)
        sid2 = save_snapshot(engine2, tmp_path / "s2")
        assert sid2 == built[2]
        m1 = json.loads((built[1] / "manifest.json").read_text())
        m2 = json.loads((tmp_path / "s2" / "manifest.json").read_text())
        assert m1["files"] == m2["files"]

    def test_search_identity_after_load(self, built):
        engine, path, _ = built
        loaded = load_snapshot(path)
        for mode in ("lexical", "semantic"):
            for q in ("tumor growth", "viral infection spread", "gene expression"):
                a = engine.search(q, mode=mode, k=10)
                b = loaded.search(q, mode=mode, k=10)
                assert [(h.doc_id, h.score) for h in a] == [(h.doc_id, h.score) for h in b]

    def test_map_and_timeline_identity(self, built):
        engine, path, _ = built
        loaded = load_snapshot(path)
        assert engine.map_payload(EMPTY_FILTER) == loaded.map_payload(EMPTY_FILTER)
        assert engine.timeline(EMPTY_FILTER, "week") == loaded.timeline(EMPTY_FILTER, "week")
        flt = Filter(title_keyword="tumor")
        assert engine.map_payload(flt) == loaded.map_payload(flt)

    def test_qa_identity(self, built):
        engine, path, _ = built
        loaded = load_snapshot(path)
        req = QaRequest(query="Which topics are covered in the corpus?", mode="corpus")
        assert engine.qa(req).to_dict() == loaded.qa(req).to_dict()
        req = QaRequest(query="tumor growth", mode="document")
        assert engine.qa(req).to_dict() == loaded.qa(req).to_dict()

    def test_config_round_trip(self, built):
        _, path, _ = built
        loaded = load_snapshot(path)
        assert loaded.cfg == CFG


class TestCorruption:
    def test_empty_directory(self, tmp_path):
        with pytest.raises(SnapshotCorrupt):
            load_snapshot(tmp_path)

    def test_missing_file(self, built, tmp_path):
        import shutil
        dst = tmp_path / "broken"
        shutil.copytree(built[1], dst)
        (dst / "topics.json").unlink()
        with pytest.raises(SnapshotCorrupt):
            load_snapshot(dst)

    def test_truncated_vectors(self, built, tmp_path):
        import shutil
        dst = tmp_path / "broken"
        shutil.copytree(built[1], dst)
        raw = (dst / "doc_vectors.f32").read_bytes()
        (dst / "doc_vectors.f32").write_bytes(raw[:-8])
        with pytest.raises(SnapshotCorrupt):
            load_snapshot(dst)

    def test_flipped_byte(self, built, tmp_path):
        import shutil
        dst = tmp_path / "broken"
        shutil.copytree(built[1], dst)
        raw = bytearray((dst / "documents.jsonl").read_bytes())
        raw[0] ^= 0xFF
        (dst / "documents.jsonl").write_bytes(bytes(raw))
        with pytest.raises(SnapshotCorrupt):
            load_snapshot(dst)

    def test_version_mismatch(self, built, tmp_path):
        import shutil
        dst = tmp_path / "broken"
        shutil.copytree(built[1], dst)
        manifest = json.loads((dst / "manifest.json").read_text())
        manifest["version"] = 999
        (dst / "manifest.json").write_text(json.dumps(manifest))
        with pytest.raises(IncompatibleSnapshot):
            load_snapshot(dst)
