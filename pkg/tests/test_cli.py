import json

import pytest

from kmdecomp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decompose_adjoint_square(capsys):
    code, out, _ = run(capsys, "decompose", "--cartan", "a2.json", "--weights", "1,1", "1,1", "--engine", "all")
    assert code == 0
    assert len(out.strip().splitlines()) == 1 + 5


def test_single_factor(capsys):
    code, out, _ = run(capsys, "decompose", "--weights", "1", "--cartan", "sl2.json")
    assert code == 0 and out.splitlines()[1].startswith("(1)\t1\texact")


def test_arity_mismatch_is_usage_error(capsys):
    code, _, err = run(capsys, "decompose", "--cartan", "a2", "--weights", "1,1", "1")
    assert code == 64 and "arity" in err
    code, _, _ = run(capsys, "decompose", "--cartan", "sl2", "--weights", "1,1")
    assert code == 64


def test_bad_flags_exit_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["decompose", "--weights", "1", "--engine", "nope"])
    assert exc.value.code == 64


def test_restrict_two_rows(capsys):
    code, out, _ = run(capsys, "restrict", "--levi", "L1", "--weights", "1,0")
    assert code == 0 and len(out.strip().splitlines()) == 3


def test_coinvariants(capsys):
    code, out, _ = run(capsys, "coinvariants", "--weights", "1", "1")
    assert code == 0 and out.strip() == "1"


def test_crystal_graph_dot(capsys):
    code, out, _ = run(capsys, "crystal-graph", "--lambda", "1,0", "--depth", "4", "--format", "dot")
    assert code == 0 and out.count("[label=\"(") == 3


def test_json_format(capsys):
    code, out, _ = run(capsys, "decompose", "--cartan", "a2", "--weights", "1,0", "0,1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["depth"] == 12 and len(data["rows"]) == 2


def test_canonical_basis_report(capsys):
    code, out, _ = run(capsys, "canonical-basis", "--cartan", "sl2", "--weights", "1", "1")
    rep = json.loads(out)
    assert code == 0 and len(rep) == 4
    assert sorted(e["class"] for e in rep) == ["(0)", "(2)", "(2)", "(2)"]


def test_disagreement_exit_2(capsys, monkeypatch):
    import kmdecomp.decomp as d

    real = d._DECOMPOSERS["path"]
    monkeypatch.setitem(d._DECOMPOSERS, "path",
                        lambda *a: ({k: v + 1 for k, v in real(*a)[0].items()}, True))
    code, _, err = run(capsys, "decompose", "--weights", "1", "1", "--engine", "all")
    assert code == 2 and "disagree" in err


def test_strict_affine_exit_3(capsys):
    code, out, _ = run(capsys, "decompose", "--cartan", "affine-a1", "--weights", "1,0", "1,0",
                       "--depth", "4", "--engine", "all")
    assert code == 0 and "exact" in out
    code, _, _ = run(capsys, "decompose", "--cartan", "affine-a1", "--weights", "1,0", "1,0",
                     "--depth", "4", "--strict")
    assert code == 3


def test_cache_transparency(capsys, tmp_path):
    args = ["decompose", "--cartan", "a2", "--weights", "1,1", "1,0", "--cache", str(tmp_path)]
    _, plain, _ = run(capsys, *args[:-2])
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert plain == first == second
    assert list(tmp_path.glob("*.json"))


def test_self_check(capsys, tmp_path):
    code, out, _ = run(capsys, "self-check", "--cache", str(tmp_path))
    assert code == 0 and "FAIL" not in out
    for f in tmp_path.glob("*.json"):
        f.write_text("garbage")
    with pytest.warns(RuntimeWarning):
        code, out, _ = run(capsys, "self-check", "--cache", str(tmp_path))
    assert code == 0
    code, _, err = run(capsys, "self-check", "--strict")
    assert code == 3 and "lower-bound" in err
