import json
import subprocess
import sys
from pathlib import Path

import pytest

from goodcycles import documents as docs
from goodcycles.cli import main
from goodcycles.config_graph import build_configuration_graph

import fig4
from test_reduction import hand_host

FIG4 = str(Path(__file__).resolve().parent.parent / "data" / "fig4.json")


def run(*argv):
    return main(list(argv))


def test_verify_k33_table(capsys):
    assert run("verify", "--family", "k33", "--audit") == 0
    out = capsys.readouterr().out
    assert "6156" in out and "684" in out
    assert "audit: pathcheck 7668/7668, farkas 72/72" in out


def test_verify_k33_machine_report_is_byte_identical(capsys):
    assert run("verify", "--family", "k33", "--report", "machine", "--threads", "1") == 0
    first = capsys.readouterr().out
    assert run("verify", "--family", "k33", "--report", "machine", "--threads", "1") == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["classes"][0]["steps"][-1]["R"] == 6156


def test_machine_report_across_workers(capsys):
    assert run("verify", "--family", "k33", "--report", "machine", "--timings", "--threads", "1") == 0
    first = json.loads(capsys.readouterr().out)
    assert run("verify", "--family", "k33", "--report", "machine", "--timings", "--threads", "2") == 0
    second = json.loads(capsys.readouterr().out)
    for d in (first, second):
        for c in d["classes"]:
            assert c.pop("duration_seconds") >= 0
            c.pop("workers")
    assert first == second


def test_classes(capsys):
    assert run("classes", "--family", "q3plus") == 0
    assert "2 class(es)" in capsys.readouterr().out
    assert run("classes", "--family", "k33", "--report", "machine") == 0
    assert len(json.loads(capsys.readouterr().out)["classes"]) == 1


def test_check_fig4(capsys):
    assert run("check", FIG4) == 0
    assert "336" in capsys.readouterr().out


def test_check_unbalanced_weights_is_usage_error(tmp_path, capsys):
    doc = fig4.document()
    g, config, w = docs.doc_to_instance(doc)
    key = build_configuration_graph(config).edge_key(0)
    doc["weights"][key] = docs.render_rational(docs.parse_rational(doc["weights"][key]) + 1)
    path = tmp_path / "bumped.json"
    docs.write(str(path), doc)
    assert run("check", str(path)) == 2
    assert "main cycle totals differ" in capsys.readouterr().err


def test_check_long_cycle_exit_1(tmp_path, capsys):
    doc = fig4.document()
    g, config, w = docs.doc_to_instance(doc)
    G = build_configuration_graph(config)
    key = G.edge_key(G.cross_edges[0])
    doc["weights"][key] = "500"
    path = tmp_path / "heavy.json"
    docs.write(str(path), doc)
    assert run("check", str(path)) == 1
    assert "long good cycle" in capsys.readouterr().out


def test_check_missing_file_and_bad_json(tmp_path):
    assert run("check", str(tmp_path / "nope.json")) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("check", str(bad)) == 2


def test_reduce(tmp_path, capsys):
    path = tmp_path / "host.json"
    docs.write(str(path), docs.host_to_doc(hand_host()))
    out = tmp_path / "inst.json"
    assert run("reduce", str(path), "--out", str(out)) == 0
    d, _ = docs.read(str(out))
    assert d["parts"] == [["a1"], ["b1"]]


def test_reduce_duplicate_pair_exit_1(tmp_path, capsys):
    path = tmp_path / "host.json"
    docs.write(str(path), docs.host_to_doc(hand_host(extra_paths=[("q4", "n", "p4")], extra_vertices=["n"])))
    assert run("reduce", str(path)) == 1
    assert "rerouted cycle 1" in capsys.readouterr().out


def test_reduce_disjoint_cycles_exit_2(tmp_path, capsys):
    c2 = ["t"] + [f"q{i}" for i in range(5)]
    path = tmp_path / "host.json"
    docs.write(str(path), docs.host_to_doc(hand_host(c2=c2)))
    assert run("reduce", str(path)) == 2
    assert "EmptyIntersection" in capsys.readouterr().err


def test_edge_order_file(tmp_path):
    good = tmp_path / "order.json"
    edges = [[f"a{i}", f"b{j}"] for j in (1, 2, 3) for i in (1, 2, 3)]
    docs.write(str(good), {"edges": edges})
    assert run("verify", "--family", "k33", "--edge-order", str(good)) == 0
    bad = tmp_path / "short.json"
    docs.write(str(bad), {"edges": edges[:-1]})
    assert run("verify", "--family", "k33", "--edge-order", str(bad)) == 2


def test_class_index_range():
    assert run("verify", "--family", "k33", "--class-index", "2") == 2


def test_witness_on_small_instance(tmp_path, capsys):
    inst = tmp_path / "c4.json"
    docs.write(str(inst), {"parts": [["a1", "a2"], ["b1", "b2"]],
                           "edges": [["a1", "b1"], ["a1", "b2"], ["a2", "b1"], ["a2", "b2"]]})
    out = tmp_path / "w.json"
    assert run("witness", "--instance", str(inst), "--out", str(out)) == 0
    assert run("check", str(out)) == 0


def cli(*argv, env=None):
    import os

    e = dict(os.environ)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "goodcycles", *argv], capture_output=True, text=True, env=e)


@pytest.mark.parametrize("value, code", [("0", 2), ("many", 2), ("2", 0)])
def test_threads_env(value, code):
    assert cli("verify", "--family", "k33", "--report", "machine", env={"GOODCYCLES_THREADS": value}).returncode == code


def test_threads_flag_overrides_env():
    r = cli("verify", "--family", "k33", "--report", "machine", "--threads", "1", env={"GOODCYCLES_THREADS": "many"})
    assert r.returncode == 0
    assert json.loads(r.stdout)["classes"][0]["workers"] == 1


def test_bad_usage_exit_2():
    assert cli("verify").returncode == 2
    assert cli("nonsense").returncode == 2
