import hashlib
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from ashacl.cli import main
from ashacl.engine import report_conforms, validate_results_graph
from ashacl.turtle import parse
from conftest import FIXTURES
from rule_fixtures import HEADER


@pytest.fixture
def work(tmp_path):
    for f in FIXTURES.glob("*.ttl"):
        shutil.copy(f, tmp_path / f.name)
    return tmp_path


def digest(paths):
    return {p: hashlib.sha256(Path(p).read_bytes()).hexdigest() for p in paths}


def cli(capsys, *args):
    try:
        code = main([str(a) for a in args])
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("n", [1, 2, 3])
def test_examples_conforms_mode(work, capsys, n):
    shapes = work / f"ex{n}_shapes.ttl"
    assert cli(capsys, "--data", work / f"ex{n}_data_ok.ttl", "--shapes", shapes, "--conforms")[:2] == (0, "true\n")
    assert cli(capsys, "--data", work / f"ex{n}_data_bad.ttl", "--shapes", shapes, "--conforms")[:2] == (1, "false\n")


@pytest.mark.parametrize("name", ["ex1_data_ok.ttl", "ex2_data_bad.ttl", "ex3_data_bad.ttl"])
@pytest.mark.parametrize("fmt", ["turtle", "ntriples"])
def test_report_mode_agrees_with_exit_code(work, capsys, name, fmt):
    shapes = work / f"{name[:3]}_shapes.ttl"
    code, out, _ = cli(capsys, "--data", work / name, "--shapes", shapes, "--format", fmt, "--self-check")
    report = parse(out, fmt)
    assert validate_results_graph(report) == []
    assert report_conforms(report) == (code == 0)
    code2, out2, _ = cli(capsys, "--data", work / name, "--shapes", shapes, "--format", fmt)
    assert (code2, out2) == (code, out)


def test_out_file(work, capsys):
    out = work / "report.ttl"
    code, stdout, _ = cli(capsys, "--data", work / "ex2_data_bad.ttl", "--shapes", work / "ex2_shapes.ttl", "--out", out)
    assert code == 1 and stdout == ""
    assert report_conforms(parse(out.read_text())) is False


def test_refuses_to_overwrite_input(work, capsys):
    data = work / "ex2_data_bad.ttl"
    before = digest([data])
    code, _, err = cli(capsys, "--data", data, "--shapes", work / "ex2_shapes.ttl", "--out", data)
    assert code == 3 and "overwrite" in err
    assert digest([data]) == before


def test_missing_file(work, capsys):
    code, _, err = cli(capsys, "--data", work / "nope.ttl", "--shapes", work / "ex1_shapes.ttl")
    assert code == 3 and "no such file" in err


def test_parse_error(work, capsys):
    bad = work / "bad.ttl"
    bad.write_text("<http://e/s> <http://e/p> .\n")
    code, _, err = cli(capsys, "--data", bad, "--shapes", work / "ex1_shapes.ttl")
    assert code == 3 and "bad.ttl:1:" in err


def test_usage_errors(work, capsys):
    assert cli(capsys, "--shapes", work / "ex1_shapes.ttl")[0] == 3
    assert cli(capsys, "--data", work / "ex1_data_ok.ttl")[0] == 3
    code, _, err = cli(capsys, "--data", work / "ex1_data_ok.ttl", "--shapes", work / "ex1_shapes.ttl",
                       "--node", "http://example.org/example/alice")
    assert code == 3 and "--shape" in err


def test_focus_shape_and_node(work, capsys):
    args = ["--data", work / "ex2_data_bad.ttl", "--shapes", work / "ex2_shapes.ttl", "--conforms",
            "--shape", "http://example.org/example/s"]
    assert cli(capsys, *args)[:2] == (1, "false\n")
    assert cli(capsys, *args, "--node", "<http://example.org/example/bob>")[:2] == (0, "true\n")
    assert cli(capsys, *args, "--node", "http://example.org/example/alice")[:2] == (1, "false\n")
    assert cli(capsys, *args, "--node", '"lit"')[:2] == (0, "true\n")


def _write(path, body):
    path.write_text(HEADER + body)
    return path


def test_failure_exit_codes(work, capsys):
    data = work / "ex1_data_ok.ttl"
    rec = _write(work / "rec.ttl", "ex:s a sh:Shape ; sh:not [ sh:and ( ex:s ) ] .")
    code, _, err = cli(capsys, "--data", data, "--shapes", rec)
    assert code == 2 and "RecursiveShapesGraph" in err
    ill = _write(work / "ill.ttl", 'ex:s a sh:Shape ; sh:minCount "x" ; sh:nodeKind ex:Foo ; sh:path ex:p, ex:q .')
    code, _, err = cli(capsys, "--data", data, "--shapes", ill)
    assert code == 2 and "IllFormedShapesGraph" in err
    for rule in ("min-count-type", "node-kind-value", "path-multiple"):
        assert f"[{rule}]" in err
    ent = _write(work / "ent.ttl", "ex:s a sh:Shape . ex:g sh:entailment ex:RDFS .")
    code, _, err = cli(capsys, "--data", data, "--shapes", ent)
    assert code == 2 and "UnsupportedEntailment" in err


def test_resource_limit(work, capsys):
    data = _write(work / "many.ttl", " ".join(f"ex:n{i} ex:p 1 ." for i in range(5)))
    shapes = _write(work / "s.ttl", "ex:s sh:targetSubjectsOf ex:p ; sh:class ex:C .")
    code, _, err = cli(capsys, "--data", data, "--shapes", shapes, "--max-results", "3")
    assert code == 2 and "ResourceLimit" in err


def test_imports_cycle_and_shapes_from_data(work, capsys):
    lib = work / "lib"
    lib.mkdir()
    _write(lib / "a.ttl", "ex:a <http://www.w3.org/2002/07/owl#imports> <http://example.org/lib/b.ttl> .\n"
                          "ex:s sh:targetNode ex:zed ; sh:class ex:C .")
    _write(lib / "b.ttl", "ex:b <http://www.w3.org/2002/07/owl#imports> <http://example.org/lib/a.ttl> .\n"
                          "ex:zed a ex:D .")
    shapes = _write(work / "main_shapes.ttl", "ex:m <http://www.w3.org/2002/07/owl#imports> <http://example.org/lib/a.ttl> .")
    data = _write(work / "main_data.ttl", "ex:zed a ex:C .")
    common = ["--data", data, "--shapes", shapes, "--conforms",
              "--import-root", lib, "--import-prefix", "http://example.org/lib/"]
    assert cli(capsys, *common)[:2] == (0, "true\n")
    assert cli(capsys, *common, "--imports")[:2] == (0, "true\n")
    data2 = _write(work / "d2.ttl", "ex:zed a ex:X . ex:d sh:shapesGraph <http://example.org/lib/a.ttl> .")
    empty = _write(work / "empty.ttl", "")
    args = ["--data", data2, "--shapes", empty, "--conforms", "--import-root", lib,
            "--import-prefix", "http://example.org/lib/", "--shapes-from-data"]
    assert cli(capsys, *args)[:2] == (1, "false\n")


def test_missing_import_is_usage_error(work, capsys):
    shapes = _write(work / "s.ttl", "ex:m <http://www.w3.org/2002/07/owl#imports> <http://example.org/lib/gone.ttl> .")
    code, _, err = cli(capsys, "--data", work / "ex1_data_ok.ttl", "--shapes", shapes, "--imports")
    assert code == 3 and "no such file" in err


def test_inputs_untouched(work, capsys):
    inputs = sorted(work.glob("*.ttl"))
    before = digest(inputs)
    for n in (1, 2, 3):
        for kind in ("ok", "bad"):
            cli(capsys, "--data", work / f"ex{n}_data_{kind}.ttl", "--shapes", work / f"ex{n}_shapes.ttl")
    assert digest(inputs) == before


def test_module_entry_point_is_deterministic(work):
    cmd = [sys.executable, "-m", "ashacl", "--data", str(work / "ex1_data_bad.ttl"),
           "--shapes", str(work / "ex1_shapes.ttl"), "--format", "ntriples"]
    first = subprocess.run(cmd, capture_output=True, text=True, check=False)
    second = subprocess.run(cmd, capture_output=True, text=True, check=False)
    assert first.returncode == second.returncode == 1
    assert first.stdout == second.stdout
    assert report_conforms(parse(first.stdout, "ntriples")) is False
