"""Command-line driver: run a script, step the machine, write traces, or open a REPL.

Exit codes: 0 ok, 1 I/O error, 2 language error, 3 runtime (transform) error.
"""

from __future__ import annotations

import argparse
import secrets
import sys
from dataclasses import dataclass
from typing import Optional, TextIO

from .engine import Machine
from .errors import DMMError, MachineHalted, TransformFailure
from .lang.interp import Interpreter
from .lang.lexer import tokenize
from .lang.parser import Parser

EXIT_OK, EXIT_IO, EXIT_LANG, EXIT_RUNTIME = 0, 1, 2, 3

PROMPT = "dmm> "
CONTINUE_PROMPT = "...> "


@dataclass
class RunConfig:
    script_path: Optional[str] = None
    steps: int = 0
    seed: int = 0
    trace_path: Optional[str] = None
    repl: bool = False
    show_matrix_every: Optional[int] = None

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError("steps must be >= 0")


def diagnostic(exc: DMMError, source: str = "<input>") -> str:
    if exc.pos is None:
        return f"{source}: error: {exc.message}"
    line, col = exc.pos
    return f"{source}:{line}:{col}: error: {exc.message}"


def _exit_code(exc: DMMError) -> int:
    return EXIT_RUNTIME if isinstance(exc, (TransformFailure, MachineHalted)) else EXIT_LANG


def emit_trace(machine: Machine, sink: TextIO) -> None:
    sink.write(machine.snapshot().to_json() + "\n")


def repl_loop(interp: Interpreter, stdin: TextIO, stdout: TextIO, prompt: bool = True) -> None:
    """Read statements until EOF; errors are reported and the session continues."""
    buf = ""
    while True:
        if prompt:
            stdout.write(CONTINUE_PROMPT if buf else PROMPT)
            stdout.flush()
        line = stdin.readline()
        if not line:
            break
        buf += line
        try:
            toks = tokenize(buf)
            if not toks:
                buf = ""
                continue
            if toks[-1].text != ";":
                continue
            stmts = Parser(toks).program()
        except DMMError as exc:
            stdout.write(diagnostic(exc) + "\n")
            buf = ""
            continue
        buf = ""
        for stmt in stmts:
            try:
                res = interp.execute(stmt)
            except DMMError as exc:
                stdout.write(diagnostic(exc) + "\n")
                break
            if res is not None:
                stdout.write(res + "\n")
    if prompt:
        stdout.write("\n")


def run(config: RunConfig, stdin: TextIO = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    source = config.script_path or "<input>"
    trace = None
    try:
        text = None
        if config.script_path:
            with open(config.script_path, encoding="utf-8") as fh:
                text = fh.read()
        if config.trace_path:
            trace = open(config.trace_path, "w", encoding="utf-8")
        interp = Interpreter(Machine(seed=config.seed), trace=trace, out=stdout,
                             show_matrix_every=config.show_matrix_every)
        try:
            if text is not None:
                for res in interp.run(text):
                    stdout.write(res + "\n")
            interp.advance(config.steps)
        except DMMError as exc:
            stderr.write(diagnostic(exc, source) + "\n")
            return _exit_code(exc)
        if config.repl:
            repl_loop(interp, stdin, stdout, prompt=stdin.isatty())
        return EXIT_OK
    except OSError as exc:
        stderr.write(f"{source}: error: {exc}\n")
        return EXIT_IO
    finally:
        if trace is not None:
            trace.close()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dmm", description="Run dataflow matrix machine scripts.")
    p.add_argument("--script", dest="script_path", help="script file (.dmm)")
    p.add_argument("--steps", type=int, default=0, help="ticks to run after the script")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--entropy", action="store_true", help="seed from system entropy instead of --seed")
    p.add_argument("--trace", dest="trace_path", help="write one JSON record per tick here")
    p.add_argument("--repl", action="store_true", help="interactive session after the script")
    p.add_argument("--show-matrix-every", type=int, default=None, metavar="N",
                   help="print the matrix every N ticks")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.steps < 0:
        print("dmm: error: --steps must be >= 0", file=sys.stderr)
        return EXIT_LANG
    seed = secrets.randbits(64) if args.entropy else args.seed
    if not (args.script_path or args.repl or args.steps):
        args.repl = True
    config = RunConfig(args.script_path, args.steps, seed, args.trace_path, args.repl,
                       args.show_matrix_every)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
