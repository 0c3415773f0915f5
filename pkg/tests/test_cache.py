import json

import pytest

from kmdecomp.cache import Cache, FORMAT_VERSION, cache_key, resolve_cache_dir
from kmdecomp.decomp import MultiplicityTable, decompose


def _fetch(cache, datum, lams):
    key = cache_key(datum, "decompose", "crystal", lams, 12)
    return key, cache.fetch(key, lambda: decompose(datum, lams), lambda t: t.to_json(),
                            MultiplicityTable.from_json)


def test_roundtrip_is_byte_identical(tmp_path, A2):
    cache = Cache(tmp_path)
    lams = ((1, 1), (1, 0))
    key, first = _fetch(cache, A2, lams)
    assert (tmp_path / f"{key}.json").exists()
    _, second = _fetch(cache, A2, lams)
    assert first.dumps() == second.dumps() == decompose(A2, lams).dumps()


def test_key_depends_on_everything(A2, SL2):
    base = cache_key(A2, "decompose", "crystal", [(1, 0)], 12)
    assert base != cache_key(A2, "decompose", "path", [(1, 0)], 12)
    assert base != cache_key(A2, "decompose", "crystal", [(0, 1)], 12)
    assert base != cache_key(A2, "decompose", "crystal", [(1, 0)], 11)
    assert base != cache_key(A2, "restrict", "crystal", [(1, 0)], 12, [0])


def test_corrupt_entry_is_bypassed(tmp_path, A2):
    cache = Cache(tmp_path)
    key, good = _fetch(cache, A2, ((1, 0),))
    (tmp_path / f"{key}.json").write_text("{not json")
    with pytest.warns(RuntimeWarning):
        _, again = _fetch(cache, A2, ((1, 0),))
    assert again.dumps() == good.dumps()
    # and the entry was rewritten
    assert json.loads((tmp_path / f"{key}.json").read_text())["version"] == FORMAT_VERSION


def test_version_mismatch_invalidates(tmp_path, A2):
    cache = Cache(tmp_path)
    key, _ = _fetch(cache, A2, ((1, 0),))
    path = tmp_path / f"{key}.json"
    data = json.loads(path.read_text())
    data["version"] = FORMAT_VERSION + 1
    path.write_text(json.dumps(data))
    with pytest.warns(RuntimeWarning):
        assert cache.get(key) is None


def test_env_overrides_flag(monkeypatch, tmp_path):
    monkeypatch.setenv("KMDECOMP_CACHE", str(tmp_path / "env"))
    assert resolve_cache_dir("flag") == tmp_path / "env"
    monkeypatch.delenv("KMDECOMP_CACHE")
    assert resolve_cache_dir("flag").name == "flag"
    assert resolve_cache_dir(None) is None
