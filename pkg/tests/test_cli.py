import json
import subprocess
import sys

import pytest

from pgtemplates import io
from pgtemplates.cli import main
from pgtemplates.loops import build_indexed_read, build_racy_write
from pgtemplates.samples import ex_in, ex_path, ex_sib, figure_one
from pgtemplates.template import Edge, ParametricGraphTemplate


@pytest.fixture()
def files(tmp_path):
    def put(name, obj):
        path = tmp_path / name
        io.save(obj, path)
        return str(path)

    fig = figure_one()
    out = {
        "fig1": put("fig1.json", fig),
        "path": put("path.json", ex_path(3)),
        "big": put("big.json", ex_path(10**9)),
        "in": put("in.json", ex_in()),
        "sib": put("sib.json", ex_sib()),
        "racy": put("racy.json", build_racy_write()),
        "oob": put("oob.json", build_indexed_read(2)),
        "jump": put("jump.json", ParametricGraphTemplate(fig.vertices, list(fig.edges) + [Edge("a", "e")], fig.root)),
    }
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    out["bad"] = str(bad)
    a1 = tmp_path / "a1.json"
    a1.write_text('{"A1": ["1", "2"]}')
    out["a1"] = str(a1)
    mm_in = tmp_path / "mm_in.json"
    mm_in.write_text(json.dumps({"A1": [[1, 2], [3, 4]], "A2": [[5, 6], [7, 8]]}))
    out["mm_in"] = str(mm_in)
    out["dir"] = str(tmp_path)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_validate(capsys, files):
    assert run(capsys, "validate", files["fig1"]) == (0, "OK\n", "")
    code, out, _ = run(capsys, "validate", files["jump"])
    assert code == 1 and out.startswith("NoJumping")
    code, _, err = run(capsys, "validate", files["bad"])
    assert code == 1 and "malformed JSON" in err


def test_info(capsys, files):
    code, out, _ = run(capsys, "info", files["fig1"])
    assert code == 0
    assert "height: 2\n" in out and "instance_vertices: 16\n" in out and "templates: 4\n" in out
    assert "sibling_edges: 1\n" in run(capsys, "info", files["sib"])[1]


def test_flow(capsys, files):
    assert run(capsys, "flow", files["path"], "--source", "s", "--sink", "t", "--oracle") == (0, "3\nMATCH\n", "")
    assert run(capsys, "flow", files["big"], "--source", "s", "--sink", "t")[:2] == (0, "1000000000\n")
    code, out, _ = run(capsys, "flow", files["in"], "--mode", "single", "--source", "s", "--sink", "t@1", "--oracle")
    assert (code, out) == (0, "1\nMATCH\n")


def test_flow_errors(capsys, files):
    code, _, err = run(capsys, "flow", files["big"], "--source", "s", "--sink", "t", "--oracle")
    assert code == 2 and "limit" in err
    assert run(capsys, "flow", files["path"], "--source", "s", "--sink", "zz")[0] == 3
    assert run(capsys, "flow", files["in"], "--mode", "single", "--source", "s", "--sink", "t@9")[0] == 3
    assert run(capsys, "flow", files["jump"], "--source", "a", "--sink", "i")[0] == 1


def test_instantiate(capsys, files):
    code, out, _ = run(capsys, "instantiate", files["path"], "--format", "dot")
    assert code == 0 and '"v@2" -> "t"' in out
    code, out, _ = run(capsys, "instantiate", files["fig1"])
    assert code == 0 and len(json.loads(out)["vertices"]) == 16
    assert run(capsys, "instantiate", files["fig1"], "--limit", "10")[0] == 2


def test_loop(capsys, files, tmp_path):
    code, text, _ = run(capsys, "loop", "example", "matmul")
    assert code == 0
    mm = tmp_path / "mm.json"
    mm.write_text(text)
    code, out, _ = run(capsys, "loop", "run", str(mm), "--inputs", files["mm_in"])
    assert code == 0 and json.loads(out) == {"B": [["19", "22"], ["43", "50"]]}
    assert run(capsys, "loop", "races", str(mm), "--inputs", files["mm_in"])[1] == "races: 0\n"
    assert run(capsys, "loop", "races", files["racy"]) == (0, "w@0 w@1 B[0]\nraces: 1\n", "")
    assert run(capsys, "loop", "bound", str(mm), "--source", "A1", "--sink", "B", "--oracle")[:2] == (0, "2\nMATCH\n")
    code, out, _ = run(capsys, "loop", "run", files["oob"], "--inputs", files["a1"])
    assert code == 3 and out.startswith("undefined: OutOfBounds")
    code, text, _ = run(capsys, "loop", "example", "xcorr", "3", "2")
    assert code == 0 and '"parameter": "2"' in text


def test_loop_errors(capsys, files, tmp_path):
    assert run(capsys, "loop", "example", "matmul", "2", "2")[0] == 3
    assert run(capsys, "loop", "run", files["path"])[0] == 1  # plain template is not a program
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"A1": [1]}')
    assert run(capsys, "loop", "run", files["oob"], "--inputs", str(wrong))[0] == 3


def test_transform(capsys, files):
    code, out, _ = run(capsys, "transform", files["path"], "reweight")
    assert code == 0 and {e["weight"] for e in json.loads(out)["edges"]} == {"3"}
    code, out, _ = run(capsys, "transform", files["in"], "merge", "--vertex", "u")
    assert code == 0 and '"kind": "dummy"' in out
    code, out, _ = run(capsys, "transform", files["in"], "partial", "--vertex", "t", "--addr", "1")
    assert code == 0 and io.parse(out).pgt.owner("t") == "T0"
    assert run(capsys, "transform", files["sib"], "partial", "--vertex", "u", "--addr", "1")[0] == 3
    assert run(capsys, "transform", files["in"], "merge")[0] == 3


ALL_COMMANDS = [
    ("validate", "{fig1}"),
    ("info", "{fig1}"),
    ("instantiate", "{fig1}", "--format", "dot"),
    ("instantiate", "{fig1}", "--format", "json"),
    ("flow", "{fig1}", "--source", "a", "--sink", "i", "--oracle", "--cut"),
    ("flow", "{in}", "--mode", "single", "--source", "s", "--sink", "t@2", "--cut"),
    ("loop", "example", "xcorr"),
    ("loop", "races", "{racy}"),
    ("loop", "bound", "{racy}", "--source", "p", "--sink", "B"),
    ("loop", "run", "{oob}", "--inputs", "{a1}"),
    ("transform", "{fig1}", "reweight"),
    ("transform", "{fig1}", "merge", "--vertex", "e"),
    ("transform", "{fig1}", "partial", "--vertex", "e", "--addr", "1.2"),
]


@pytest.mark.parametrize("argv", ALL_COMMANDS, ids=lambda a: "-".join(x for x in a if not x.startswith("{"))[:40])
def test_byte_stable(capsys, files, argv):
    argv = [a.format(**files) for a in argv]
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)


def test_console_entry(files):
    proc = subprocess.run(
        [sys.executable, "-m", "pgtemplates.cli", "flow", files["path"], "--source", "s", "--sink", "t"],
        capture_output=True, text=True, check=False,
    )
    assert (proc.returncode, proc.stdout) == (0, "3\n")
