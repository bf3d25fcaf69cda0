"""The machine: `Self`-held matrix, two-stroke cycle, activation and collection.

Each tick is a down stroke followed by an up stroke.  On the down stroke
every input of an active neuron becomes the linear combination of neuron
outputs given by its row of the current matrix; on the up stroke every
active neuron runs its transform on those inputs.  The matrix itself is the
output of the distinguished neuron ``Self`` (an identity on matrices whose
output feeds back into its input with weight 1), so contributions wired into
``Self``'s input rewrite the network one tick later.

Neurons enter the active set as soon as the matrix references one of their
ports and leave it when it no longer does; a neuron outside the active set
reads as zero everywhere and does not compute.  Transform state of neurons
that left the active set stays resident until :meth:`Machine.garbage_collect`.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .core import INPUT, OUTPUT, NeuronType, PortName, Signature, StreamKind, inport, outport
from .errors import (
    DMMError,
    InvalidSignature,
    MachineHalted,
    TransformFailure,
    UnboundTransform,
    UnknownPort,
)
from .matrix import (
    NetMatrix,
    UpdateSpec,
    active_ports,
    add_scaled,
    dump_matrix,
    set_weight,
    update_kernel,
)
from .neurons import (
    SCALAR_FUNCTIONS,
    UPDATEWEIGHTS_INPUTS,
    Registry,
    builtin_const,
    builtin_gated,
    builtin_identity,
    builtin_scalar,
    builtin_updateweights,
    register_type,
)
from .streams import coerce_value, linear_combine, render_value, zero_value

SELF_TYPE = "id_net_matrix"
SELF_CELL = "Self"
SELF_IN = inport(SELF_TYPE, SELF_CELL, "in")
SELF_OUT = outport(SELF_TYPE, SELF_CELL, "out")
SELF = (SELF_TYPE, SELF_CELL)

SCALAR = StreamKind("scalar", "scalar")
NET_MATRIX = StreamKind("net_matrix", "net_matrix")
ROW_MASK = StreamKind("row_mask", "row_mask")
COLUMN_MASK = StreamKind("column_mask", "column_mask")


def default_signature() -> tuple[Signature, Registry]:
    """Signature and registry holding the built-in kinds and neuron types.

    Built-in types: ``id_<kind>`` identities for every built-in kind (``Self``
    is an ``id_net_matrix``), the scalar activations ``sigmoid``, ``tanh``,
    ``relu`` and ``linear``, the bias source ``one``, the gated neurons
    ``gated_scalar`` and ``gated_net_matrix`` and the matrix editor
    ``updateweights``.
    """
    sig, reg = Signature(), Registry()
    for k in (SCALAR, NET_MATRIX, ROW_MASK, COLUMN_MASK):
        sig.add_kind(k)
        reg.provide_kind(k)
    reg.provide_kind(StreamKind("sample", "signed_sample", payload_space="token"))
    reg.provide_kind(StreamKind("vec2", "vector", dim=2))
    reg.provide_kind(StreamKind("vec3", "vector", dim=3))

    for k in (SCALAR, NET_MATRIX, ROW_MASK, COLUMN_MASK):
        decl = NeuronType(f"id_{k.name}", [("in", k.name)], [("out", k.name)])
        register_type(sig, reg, decl, builtin_identity(k))
    for name in SCALAR_FUNCTIONS:
        register_type(sig, reg, NeuronType(name, [("in", "scalar")], [("out", "scalar")]),
                      builtin_scalar(name))
    register_type(sig, reg, NeuronType("one", [], [("out", "scalar")]), builtin_const(SCALAR, 1.0))
    for k in (SCALAR, NET_MATRIX):
        decl = NeuronType(f"gated_{k.name}", [("value", k.name), ("mask", "scalar")],
                          [("out", k.name)])
        register_type(sig, reg, decl, builtin_gated(k))
    register_type(sig, reg, NeuronType("updateweights", UPDATEWEIGHTS_INPUTS, [("out", "net_matrix")]),
                  builtin_updateweights(sig))
    return sig, reg


@dataclass(frozen=True)
class SetWeight:
    row: PortName
    col: PortName
    weight: float


@dataclass(frozen=True)
class UpdateWeights:
    spec: UpdateSpec


Edit = Union[SetWeight, UpdateWeights]


@dataclass
class TraceRecord:
    t: int
    entries: list = field(default_factory=list)  # (port, kind name, rendered value)

    def to_json(self) -> str:
        values = [
            {"port": str(p), "io": "in" if p.direction == INPUT else "out", "kind": k, "value": v}
            for p, k, v in self.entries
        ]
        return json.dumps({"t": self.t, "values": values}, separators=(",", ":"))


class Machine:
    def __init__(self, sig: Optional[Signature] = None, reg: Optional[Registry] = None,
                 seed: int = 0):
        if sig is None:
            sig, reg = default_signature()
        if reg is None:
            raise InvalidSignature("a registry must accompany a custom signature")
        self.sig = sig
        self.reg = reg
        self._check_signature()
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.t = 0
        self.states: dict[tuple, object] = {}
        self.active: set[tuple] = set()
        self.inputs: dict[PortName, object] = {}
        self.outputs: dict[PortName, object] = {}
        self.halted: Optional[TransformFailure] = None
        self.outputs[SELF_OUT] = NetMatrix({SELF_IN: {SELF_OUT: 1.0}})
        self._refresh()

    def _check_signature(self):
        if self.sig.kinds.get("net_matrix") != NET_MATRIX:
            raise InvalidSignature("signature lacks the net_matrix kind")
        decl = self.sig.types.get(SELF_TYPE)
        if decl is None or decl.inputs != (("in", "net_matrix"),) or decl.outputs != (("out", "net_matrix"),):
            raise InvalidSignature(f"signature lacks the {SELF_TYPE} type of Self")
        for decl in self.sig.types.values():
            if decl.transform_id not in self.reg.transforms:
                raise InvalidSignature(f"no transform bound for type {decl.type_name}")

    # state access

    @property
    def matrix(self) -> NetMatrix:
        return self.outputs[SELF_OUT]

    def _kind_of(self, p: PortName) -> StreamKind:
        try:
            return self.sig.port_kind(p)
        except UnknownPort:
            raise
        except DMMError as exc:
            raise UnknownPort(str(exc)) from None

    def read_output(self, p: PortName):
        if p.direction != OUTPUT:
            raise UnknownPort(f"{p} is not an output port")
        kind = self._kind_of(p)
        v = self.outputs.get(p)
        return zero_value(kind) if v is None else v

    def read_input(self, p: PortName):
        if p.direction != INPUT:
            raise UnknownPort(f"{p} is not an input port")
        kind = self._kind_of(p)
        v = self.inputs.get(p)
        return zero_value(kind) if v is None else v

    def ports(self, neuron: tuple) -> list[PortName]:
        return self.sig.ports_of(*neuron)

    def snapshot(self) -> TraceRecord:
        ports = sorted(p for n in self.active for p in self.ports(n))
        entries = []
        for p in ports:
            kind = self.sig.port_kind(p)
            v = self.read_input(p) if p.direction == INPUT else self.read_output(p)
            entries.append((p, kind.name, render_value(kind, v)))
        return TraceRecord(self.t, entries)

    def dump(self) -> str:
        return dump_matrix(self.matrix)

    def footprint(self) -> int:
        """Count of allocated entries across all runtime structures."""
        return len(self.matrix) + len(self.states) + len(self.inputs) + len(self.outputs) + len(self.active)

    def clone(self) -> "Machine":
        return copy.deepcopy(self)

    # activation

    def _referenced(self, A: NetMatrix) -> set:
        rows, cols = active_ports(A)
        return {p.neuron for p in rows} | {p.neuron for p in cols} | {SELF}

    def _check_bound(self, A: NetMatrix):
        for n in self._referenced(A) - self.active:
            decl = self.sig.neuron_type(n[0])
            if decl.transform_id not in self.reg.transforms:
                raise UnboundTransform(f"no transform bound for type {decl.type_name}")

    def _refresh(self):
        referenced = self._referenced(self.matrix)
        for n in sorted(referenced - self.active):
            decl = self.sig.neuron_type(n[0])
            self.states[n] = self.reg.transform_for(decl).initial_state
        for n in self.active - referenced:
            for p in self.ports(n):
                self.inputs.pop(p, None)
                self.outputs.pop(p, None)
        self.active = referenced

    # the two strokes

    def down_stroke(self):
        A = self.matrix
        new_inputs = {}
        for n in sorted(self.active):
            decl: NeuronType = self.sig.types[n[0]]
            for f, kname in decl.inputs:
                r = inport(n[0], n[1], f)
                kind = self.sig.kinds[kname]
                row = A.row(r)
                if not row:
                    new_inputs[r] = zero_value(kind)
                    continue
                terms = [(w, self.read_output(c)) for c, w in sorted(row.items())]
                new_inputs[r] = linear_combine(kind, terms, self.rng)
        self.inputs = new_inputs

    def up_stroke(self):
        new_outputs = {}
        for n in sorted(self.active):
            decl: NeuronType = self.sig.types[n[0]]
            t = self.reg.transform_for(decl)
            ins = [self.read_input(inport(n[0], n[1], f)) for f, _ in decl.inputs]
            try:
                state, outs = t.step(self.states[n], ins, self.rng)
                outs = list(outs)
                if len(outs) != len(decl.outputs):
                    raise ValueError(f"emitted {len(outs)} outputs, expected {len(decl.outputs)}")
                for (f, kname), v in zip(decl.outputs, outs):
                    new_outputs[outport(n[0], n[1], f)] = coerce_value(self.sig.kinds[kname], v)
            except Exception as exc:
                self.halted = TransformFailure(
                    f"tick {self.t + 1}: neuron {n[0]}:{n[1]} failed: {exc}", neuron=n, tick=self.t + 1
                )
                raise self.halted from exc
            self.states[n] = state
        self.outputs = new_outputs
        self.t += 1
        self._refresh()

    def step(self, n: int = 1):
        if n < 0:
            raise ValueError("step count must be non-negative")
        for _ in range(n):
            if self.halted is not None:
                raise MachineHalted(str(self.halted))
            self.down_stroke()
            self.up_stroke()
        return self

    # edits

    def apply_edit(self, edit: Edit):
        A = self.matrix
        if isinstance(edit, SetWeight):
            new = set_weight(A, edit.row, edit.col, edit.weight, self.sig)
        elif isinstance(edit, UpdateWeights):
            new = add_scaled(A, update_kernel(A, edit.spec, self.sig), 1.0)
        else:
            raise TypeError(f"unknown edit {edit!r}")
        self._check_bound(new)
        self.outputs[SELF_OUT] = new
        self._refresh()
        return self

    def set_weight(self, row: PortName, col: PortName, w: float):
        return self.apply_edit(SetWeight(row, col, w))

    def update_weights(self, spec: UpdateSpec):
        return self.apply_edit(UpdateWeights(spec))

    def garbage_collect(self):
        for n in list(self.states):
            if n not in self.active:
                del self.states[n]
        return self


def new_machine(sig=None, reg=None, seed: int = 0) -> Machine:
    return Machine(sig, reg, seed)
