"""Evaluates statements against a live :class:`~dmm.engine.Machine`.

Declarations only touch the signature and the identifier environment; the
matrix changes exclusively through :meth:`Machine.apply_edit` (``#weight``
and ``#updateweights``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, TextIO

import numpy as np

from ..core import INPUT, OUTPUT, NeuronType, PortName, validate_name
from ..engine import Machine, SetWeight, UpdateWeights
from ..errors import (
    DMMError,
    DuplicateIdentifier,
    EvalError,
    KindMismatch,
    MalformedMask,
    UnboundTransform,
    UnknownIdentifier,
    UnknownKind,
)
from ..matrix import MaskVector, UpdateSpec, all_ones
from ..neurons import check_arity
from ..streams import format_value
from .parser import parse_program
from .syntax import (
    Dotted,
    Gc,
    Ident,
    KindDecl,
    NeuronDecl,
    NeuronName,
    NewCellType,
    Seed,
    Show,
    Statement,
    Step,
    StreamDecl,
    Triple,
    UpdateWeightsStmt,
    Weight,
)


@dataclass(frozen=True)
class NeuronHandle:
    type_name: str
    cell_name: str


@dataclass
class Env:
    """Identifier bindings plus the pool of cell names already in use."""

    bindings: dict = field(default_factory=dict)
    used_names: set = field(default_factory=set)
    counter: int = 0

    def bind(self, ident: str, value) -> None:
        validate_name(ident)
        if ident in self.bindings:
            raise DuplicateIdentifier(f"identifier {ident!r} is already bound")
        self.bindings[ident] = value

    def lookup(self, ident: str):
        try:
            return self.bindings[ident]
        except KeyError:
            raise UnknownIdentifier(f"unknown identifier {ident!r}") from None


def autogen_cellname(env: Env, taken=()) -> str:
    """Fresh ``g<counter>`` name not in ``env.used_names`` or ``taken``."""
    while True:
        name = f"g{env.counter}"
        env.counter += 1
        if name not in env.used_names and name not in taken:
            env.used_names.add(name)
            return name


class Interpreter:
    """Owns a machine and an environment; executes statements one at a time.

    ``trace`` receives one JSON line per tick; ``out`` receives matrix dumps
    requested by ``show_matrix_every``.
    """

    def __init__(self, machine: Optional[Machine] = None, env: Optional[Env] = None,
                 trace: Optional[TextIO] = None, out: Optional[TextIO] = None,
                 show_matrix_every: Optional[int] = None):
        self.machine = machine if machine is not None else Machine()
        self.env = env if env is not None else Env()
        self.trace = trace
        self.out = out
        self.show_matrix_every = show_matrix_every
        self.ticks_emitted = 0

    # driving the machine

    def advance(self, n: int) -> None:
        m = self.machine
        for _ in range(n):
            m.step(1)
            if self.trace is not None:
                self.trace.write(m.snapshot().to_json() + "\n")
                self.ticks_emitted += 1
            if self.show_matrix_every and self.out is not None and m.t % self.show_matrix_every == 0:
                self.out.write(f"t = {m.t}\n{m.dump()}")

    def run(self, text: str) -> list[str]:
        """Parse and execute ``text``; return the text produced by ``#show``/``#step``."""
        printed = []
        for stmt in parse_program(text):
            res = self.execute(stmt)
            if res is not None:
                printed.append(res)
        return printed

    def execute(self, stmt: Statement) -> Optional[str]:
        try:
            handler = getattr(self, f"_eval_{type(stmt).__name__}")
            return handler(stmt)
        except DMMError as exc:
            if exc.pos is None:
                exc.pos = stmt.pos
            raise
        except ValueError as exc:
            raise EvalError(str(exc), stmt.pos) from exc

    # port resolution

    def _machine_names(self) -> set:
        names = {n[1] for n in self.machine.states}
        names.update(n[1] for n in self.machine.active)
        return names

    def resolve(self, ref, direction: Optional[str] = None) -> PortName:
        sig = self.machine.sig
        if isinstance(ref, Triple):
            for part in (ref.type_name, ref.cell_name, ref.field_name):
                validate_name(part)
            decl = sig.neuron_type(ref.type_name)
            port = PortName(ref.type_name, ref.cell_name, ref.field_name, decl.direction_of(ref.field_name))
            self.env.used_names.add(ref.cell_name)
        elif isinstance(ref, Dotted):
            handle = self.env.lookup(ref.neuron)
            if not isinstance(handle, NeuronHandle):
                raise EvalError(f"{ref.neuron!r} does not denote a neuron")
            decl = sig.neuron_type(handle.type_name)
            port = PortName(handle.type_name, handle.cell_name, ref.field_name,
                            decl.direction_of(ref.field_name))
        else:
            port = self.env.lookup(ref.name)
            if not isinstance(port, PortName):
                raise EvalError(f"{ref.name!r} denotes a neuron, not a stream")
        if direction is not None and port.direction != direction:
            raise EvalError(f"{ref} is a neuron {port.direction}, expected an {direction}")
        return port

    def _mask(self, terms, direction) -> dict:
        acc: dict[PortName, float] = {}
        for t in terms:
            p = self.resolve(t.ref, direction)
            acc[p] = acc.get(p, 0.0) + t.coef
        return acc

    # statements

    def _eval_KindDecl(self, s: KindDecl):
        m = self.machine
        for name in s.names:
            impl = m.reg.kinds.get(name)
            if impl is None:
                raise UnknownKind(f"no implementation supplied for kind {name!r}")
            m.sig.add_kind(impl)

    def _eval_NewCellType(self, s: NewCellType):
        m = self.machine
        decl = NeuronType(s.type_name, [(f, k) for k, f in s.inputs], [(f, k) for k, f in s.outputs])
        t = m.reg.transforms.get(decl.transform_id)
        if t is None:
            raise UnboundTransform(f"no transform supplied for type {s.type_name!r}")
        check_arity(decl, t)
        m.sig.add_type(decl)

    def _eval_NeuronName(self, s: NeuronName):
        self.machine.sig.neuron_type(s.type_name)
        validate_name(s.cell_name)
        self.env.used_names.add(s.cell_name)

    def _eval_NeuronDecl(self, s: NeuronDecl):
        decl = self.machine.sig.neuron_type(s.type_name)
        idents = [s.neuron_id] + [i for _, i in s.outputs + s.inputs]
        for ident in idents:
            if ident in self.env.bindings:
                raise DuplicateIdentifier(f"identifier {ident!r} is already bound")
        if len(set(idents)) != len(idents):
            raise DuplicateIdentifier(f"identifier repeated in declaration of {s.neuron_id!r}")
        for f, _ in s.outputs:
            decl.field_kind(f, OUTPUT)
        for f, _ in s.inputs:
            decl.field_kind(f, INPUT)
        cell = autogen_cellname(self.env, self._machine_names())
        self.env.bind(s.neuron_id, NeuronHandle(s.type_name, cell))
        for f, ident in s.outputs:
            self.env.bind(ident, PortName(s.type_name, cell, f, OUTPUT))
        for f, ident in s.inputs:
            self.env.bind(ident, PortName(s.type_name, cell, f, INPUT))

    def _eval_StreamDecl(self, s: StreamDecl):
        handle = self.env.lookup(s.neuron_id)
        if not isinstance(handle, NeuronHandle):
            raise EvalError(f"{s.neuron_id!r} does not denote a neuron")
        sig = self.machine.sig
        sig.kind(s.kind_name)
        decl = sig.neuron_type(handle.type_name)
        kind = decl.field_kind(s.field_name, INPUT)
        if kind != s.kind_name:
            raise KindMismatch(f"{s.neuron_id}.{s.field_name} carries kind {kind}, not {s.kind_name}")
        self.env.bind(s.stream_id, PortName(handle.type_name, handle.cell_name, s.field_name, INPUT))

    def _eval_Weight(self, s: Weight):
        r = self.resolve(s.dst, INPUT)
        c = self.resolve(s.src, OUTPUT)
        self.machine.apply_edit(SetWeight(r, c, s.value))

    def _eval_UpdateWeightsStmt(self, s: UpdateWeightsStmt):
        sig = self.machine.sig
        gamma = self._mask(s.target, INPUT)
        if s.rows is not None:
            alpha = MaskVector(self._mask(s.rhs, OUTPUT))
            beta = MaskVector(self._mask(s.rows, INPUT))
            spec = UpdateSpec(MaskVector(gamma), alpha, beta)
        else:
            rhs = self._mask(s.rhs, None)
            directions = {p.direction for p in rhs}
            if len(directions) > 1:
                raise MalformedMask("right-hand side mixes neuron inputs and outputs")
            kinds = {sig.port_kind(p).name for p in list(rhs) + list(gamma)}
            if len(kinds) > 1:
                raise MalformedMask(f"update mixes stream kinds {sorted(kinds)}")
            if directions == {OUTPUT}:
                # outputs are added to the target rows through a fake all-ones row
                spec = UpdateSpec(MaskVector(gamma), MaskVector(rhs), MaskVector(), fake_row=1.0)
            else:
                spec = UpdateSpec(MaskVector(gamma), all_ones(kinds.pop()), MaskVector(rhs))
        self.machine.apply_edit(UpdateWeights(spec))

    def _eval_Step(self, s: Step):
        self.advance(s.n)
        return f"t = {self.machine.t}"

    def _eval_Show(self, s: Show):
        m = self.machine
        if s.what == "matrix":
            return m.dump().rstrip("\n")
        if s.what == "active":
            return "\n".join(f"{t}:{c}" for t, c in sorted(m.active))
        if s.what == "tick":
            return f"t = {m.t}"
        if s.what == "trace":
            return m.snapshot().to_json()
        port = self.resolve(s.what)
        kind = m.sig.port_kind(port)
        v = m.read_input(port) if port.direction == INPUT else m.read_output(port)
        return f"{port} = {format_value(kind, v)}"

    def _eval_Seed(self, s: Seed):
        self.machine.rng = np.random.default_rng(s.value)

    def _eval_Gc(self, s: Gc):
        self.machine.garbage_collect()
