import io
import subprocess
import sys

import pytest

from dmm import Machine, NeuronType, Transform, register_type
from dmm import cli
from dmm.cli import EXIT_IO, EXIT_LANG, EXIT_OK, EXIT_RUNTIME, RunConfig, repl_loop, run
from dmm.engine import default_signature
from dmm.lang import Interpreter
from oracles import read_trace

SCRIPT = """\
#neuron id_scalar:a out:ao = #transformof in:ai;
#weight ai ao = 1;
#weight ai one:b:out = 0.5;
"""


def _script(tmp_path, text=SCRIPT, name="prog.dmm"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _run(config):
    out, err = io.StringIO(), io.StringIO()
    code = run(config, io.StringIO(), out, err)
    return code, out.getvalue(), err.getvalue()


def test_batch_run_writes_one_record_per_tick(tmp_path):
    trace = tmp_path / "t.jsonl"
    code, _, err = _run(RunConfig(_script(tmp_path), steps=10, trace_path=str(trace)))
    assert code == EXIT_OK and err == ""
    records = read_trace(trace.read_text())
    assert [r["t"] for r in records] == list(range(1, 11))
    acc = {v["port"]: v["value"] for v in records[-1]["values"]}
    assert acc["id_scalar:g0:out"] == 9 * 0.5


def test_zero_steps_empty_trace(tmp_path):
    trace = tmp_path / "t.jsonl"
    assert _run(RunConfig(steps=0, trace_path=str(trace)))[0] == EXIT_OK
    assert trace.read_text() == ""


def test_byte_identical_traces(tmp_path):
    script = _script(tmp_path, SCRIPT + "#kind sample;\n")
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        _run(RunConfig(script, steps=30, seed=3, trace_path=str(path)))
    assert a.read_bytes() == b.read_bytes()


def test_missing_script_is_io_error(tmp_path):
    code, _, err = _run(RunConfig(str(tmp_path / "nope.dmm"), steps=1))
    assert code == EXIT_IO and "error" in err


def test_cross_kind_weight_is_language_error(tmp_path):
    script = _script(tmp_path, "#step;\n#weight sigmoid:s:in id_net_matrix:Self:out = 1;\n")
    code, _, err = _run(RunConfig(script, steps=3))
    assert code == EXIT_LANG
    assert err.startswith(f"{script}:2:1: error:")
    assert "sigmoid:s:in" in err and "id_net_matrix:Self:out" in err
    assert "scalar" in err and "net_matrix" in err


def test_parse_error_is_language_error(tmp_path):
    code, _, err = _run(RunConfig(_script(tmp_path, "#step 3"), steps=1))
    assert code == EXIT_LANG and ":1:" in err


def test_transform_failure_is_runtime_error(tmp_path, monkeypatch):
    def machine_with_failing_type(seed=0):
        sig, reg = default_signature()

        def fail(state, inputs, rng):
            raise ZeroDivisionError("bad input")

        register_type(sig, reg, NeuronType("fragile", [("in", "scalar")], [("out", "scalar")]),
                      Transform(1, 1, fail))
        return Machine(sig, reg, seed=seed)

    monkeypatch.setattr(cli, "Machine", machine_with_failing_type)
    script = _script(tmp_path, "#weight fragile:f:in one:b:out = 1;\n")
    code, _, err = _run(RunConfig(script, steps=5))
    assert code == EXIT_RUNTIME and "fragile" in err


def test_negative_steps_rejected():
    with pytest.raises(ValueError):
        RunConfig(steps=-1)
    assert cli.main(["--steps", "-2"]) == EXIT_LANG


def test_show_matrix_every(tmp_path):
    code, out, _ = _run(RunConfig(_script(tmp_path), steps=4, show_matrix_every=2))
    assert code == EXIT_OK
    assert out.count("t = ") == 2 and "one:b:out" in out


def test_repl_continues_after_errors():
    interp = Interpreter()
    stdin = io.StringIO("#weight id_scalar:a:in\n one:b:out = 2;\n#weight nope x = 1;\n"
                        "#step 2; #show id_scalar:a:out;\n@\n#show tick;\n")
    out = io.StringIO()
    repl_loop(interp, stdin, out, prompt=False)
    lines = out.getvalue().splitlines()
    assert lines[0].startswith("<input>:1:1: error:") and "nope" in lines[0]
    assert lines[1:3] == ["t = 2", "id_scalar:a:out = 2"]
    assert "error" in lines[3]
    assert lines[4] == "t = 2"


def test_repl_and_batch_traces_agree(tmp_path):
    batch = io.StringIO()
    Interpreter(trace=batch).run(SCRIPT + "#step 7;")
    repl = io.StringIO()
    repl_loop(Interpreter(trace=repl), io.StringIO(SCRIPT + "#step 3;\n#step 4;\n"), io.StringIO(), prompt=False)
    assert batch.getvalue() == repl.getvalue()


def test_console_entry_point(tmp_path):
    trace = tmp_path / "t.jsonl"
    proc = subprocess.run([sys.executable, "-m", "dmm", "--script", _script(tmp_path), "--steps", "3",
                           "--trace", str(trace)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert len(read_trace(trace.read_text())) == 3
