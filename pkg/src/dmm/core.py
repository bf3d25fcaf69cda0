"""Names, stream kinds, neuron type declarations, ports and the machine signature.

Rows and columns of the network matrix are addressed by string triples
``type:cell:field``; every string component is a *name* over the alphabet
``[A-Za-z0-9_]``.  Structural characters (space, ``#;:,=.``) never occur in
names, which keeps the description language unambiguous.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    DuplicateKind,
    DuplicateType,
    EmptyName,
    ForbiddenCharacter,
    UnknownField,
    UnknownKind,
    UnknownType,
)

_NAME_CHAR = re.compile(r"[A-Za-z0-9_]")

INPUT = "input"
OUTPUT = "output"

SHAPES = ("scalar", "vector", "row_mask", "column_mask", "net_matrix", "signed_sample")


def validate_name(text: str) -> str:
    if not text:
        raise EmptyName("name must be non-empty")
    for i, ch in enumerate(text):
        if not _NAME_CHAR.fullmatch(ch):
            raise ForbiddenCharacter(text, i)
    return text


def is_name(text: str) -> bool:
    return bool(text) and all(_NAME_CHAR.fullmatch(ch) for ch in text)


def fmt_real(x: float) -> str:
    """Shortest round-trip decimal; integral values drop the trailing ``.0``."""
    x = float(x)
    if x == 0.0:
        return "0"
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r}")
    return repr(x)


@dataclass(frozen=True)
class StreamKind:
    """A declared kind of linear stream.

    ``shape`` is one of :data:`SHAPES`; ``dim`` is used by vector kinds and
    ``payload_space`` by signed-sample kinds.
    """

    name: str
    shape: str
    dim: Optional[int] = None
    payload_space: Optional[str] = None

    def __post_init__(self):
        validate_name(self.name)
        if self.shape not in SHAPES:
            raise ValueError(f"unknown stream shape {self.shape!r}")
        if self.shape == "vector":
            if self.dim is None or int(self.dim) < 1:
                raise ValueError("vector kinds need dim >= 1")
        if self.shape == "signed_sample" and self.payload_space is not None:
            validate_name(self.payload_space)


@dataclass(frozen=True)
class NeuronType:
    """Interface of a neuron type: ordered (field, kind) inputs and outputs.

    The transform itself lives in a :class:`dmm.neurons.Registry` under
    ``transform_id`` (defaults to the type name).
    """

    type_name: str
    inputs: tuple = ()
    outputs: tuple = ()
    transform_id: str = ""

    def __post_init__(self):
        validate_name(self.type_name)
        object.__setattr__(self, "inputs", tuple(tuple(f) for f in self.inputs))
        object.__setattr__(self, "outputs", tuple(tuple(f) for f in self.outputs))
        if not self.transform_id:
            object.__setattr__(self, "transform_id", self.type_name)
        if len(self.outputs) < 1:
            raise ValueError(f"neuron type {self.type_name} needs at least one output")
        names = [f for f, _ in self.inputs + self.outputs]
        for f in names:
            validate_name(f)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate field names in neuron type {self.type_name}")

    def field_kind(self, field_name: str, direction: str) -> str:
        fields = self.inputs if direction == INPUT else self.outputs
        for f, k in fields:
            if f == field_name:
                return k
        raise UnknownField(f"type {self.type_name} has no {direction} field {field_name!r}")

    def direction_of(self, field_name: str) -> str:
        for f, _ in self.inputs:
            if f == field_name:
                return INPUT
        for f, _ in self.outputs:
            if f == field_name:
                return OUTPUT
        raise UnknownField(f"type {self.type_name} has no field {field_name!r}")


@dataclass(frozen=True, order=True)
class PortName:
    """One neuron input (a matrix row) or output (a matrix column).

    Ordering is lexicographic on (type, cell, field), with direction as the
    final tie-breaker so that the order is total.
    """

    type_name: str
    cell_name: str
    field_name: str
    direction: str = field(default=OUTPUT)

    def __str__(self):
        return f"{self.type_name}:{self.cell_name}:{self.field_name}"

    @property
    def neuron(self) -> tuple:
        return (self.type_name, self.cell_name)


def inport(type_name, cell_name, field_name) -> PortName:
    return PortName(type_name, cell_name, field_name, INPUT)


def outport(type_name, cell_name, field_name) -> PortName:
    return PortName(type_name, cell_name, field_name, OUTPUT)


def compare_ports(a: PortName, b: PortName) -> int:
    return (a > b) - (a < b)


class Signature:
    """Declared stream kinds and neuron types of a machine family."""

    def __init__(self, kinds=(), types=()):
        self.kinds: dict[str, StreamKind] = {}
        self.types: dict[str, NeuronType] = {}
        for k in kinds:
            self.add_kind(k)
        for t in types:
            self.add_type(t)

    def add_kind(self, kind: StreamKind) -> None:
        old = self.kinds.get(kind.name)
        if old is not None:
            if old == kind:
                return
            raise DuplicateKind(f"kind {kind.name} already declared as {old.shape}")
        self.kinds[kind.name] = kind

    def add_type(self, decl: NeuronType) -> None:
        if decl.type_name in self.types:
            raise DuplicateType(f"neuron type {decl.type_name} already declared")
        for f, k in decl.inputs + decl.outputs:
            if k not in self.kinds:
                raise UnknownKind(f"field {decl.type_name}.{f} uses undeclared kind {k!r}")
        self.types[decl.type_name] = decl

    def kind(self, name: str) -> StreamKind:
        try:
            return self.kinds[name]
        except KeyError:
            raise UnknownKind(f"undeclared kind {name!r}") from None

    def neuron_type(self, type_name: str) -> NeuronType:
        try:
            return self.types[type_name]
        except KeyError:
            raise UnknownType(f"undeclared neuron type {type_name!r}") from None

    def port_kind(self, p: PortName) -> StreamKind:
        decl = self.neuron_type(p.type_name)
        return self.kinds[decl.field_kind(p.field_name, p.direction)]

    def ports_of(self, type_name: str, cell_name: str) -> list[PortName]:
        decl = self.neuron_type(type_name)
        ins = [inport(type_name, cell_name, f) for f, _ in decl.inputs]
        outs = [outport(type_name, cell_name, f) for f, _ in decl.outputs]
        return ins + outs


def port_kind(sig: Signature, p: PortName) -> StreamKind:
    return sig.port_kind(p)
