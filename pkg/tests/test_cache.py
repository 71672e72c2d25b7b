import json
import threading
from fractions import Fraction

from chernflow.cache import ResultCache, canonical_json, content_hash


def test_canonical_json_key_order():
    assert canonical_json({"b": 1, "a": Fraction(1, 2)}) == '{"a":"1/2","b":1}'
    assert content_hash({"a": 1, "b": 2}) == content_hash({"b": 2, "a": 1})


def test_round_trip(tmp_path):
    c = ResultCache(tmp_path)
    assert c.lookup("k") is None
    c.store("k", "payload")
    assert c.lookup("k") == "payload"


def test_corrupt_entry_ignored(tmp_path, caplog):
    c = ResultCache(tmp_path)
    c.store("k", "payload")
    path = tmp_path / "k.json"
    doc = json.loads(path.read_text())
    doc["payload"] = "tampered"
    path.write_text(json.dumps(doc))
    assert c.lookup("k") is None
    assert "corrupt" in caplog.text
    path.write_text("{not json")
    assert c.lookup("k") is None


def test_concurrent_writers(tmp_path):
    c = ResultCache(tmp_path)
    threads = [threading.Thread(target=c.store, args=("k", f"v{i}")) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert c.lookup("k") in {f"v{i}" for i in range(8)}
