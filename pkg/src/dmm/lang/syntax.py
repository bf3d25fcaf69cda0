"""Statement nodes and the canonical printer.

Every node carries its source position in ``pos``; positions are excluded
from equality so that ``parse(print_program(ast)) == ast``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..core import fmt_real


@dataclass(frozen=True)
class Ident:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Dotted:
    """``<IdNeuron>.<fieldname>``"""

    neuron: str
    field_name: str

    def __str__(self):
        return f"{self.neuron}.{self.field_name}"


@dataclass(frozen=True)
class Triple:
    """Literal port name ``<typename>:<cellname>:<fieldname>``."""

    type_name: str
    cell_name: str
    field_name: str

    def __str__(self):
        return f"{self.type_name}:{self.cell_name}:{self.field_name}"


Ref = Union[Ident, Dotted, Triple]


@dataclass(frozen=True)
class Term:
    coef: float
    ref: Ref

    def __str__(self):
        c = fmt_real(self.coef)
        if self.coef < 0:
            c = f"({c})"
        return f"{c} * {self.ref}"


@dataclass(frozen=True)
class Statement:
    pos: Optional[tuple] = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class KindDecl(Statement):
    names: tuple


@dataclass(frozen=True)
class NewCellType(Statement):
    type_name: str
    inputs: tuple  # (kind, field) pairs
    outputs: tuple


@dataclass(frozen=True)
class NeuronName(Statement):
    type_name: str
    cell_name: str


@dataclass(frozen=True)
class NeuronDecl(Statement):
    type_name: str
    neuron_id: str
    outputs: tuple  # (field, identifier) pairs
    inputs: tuple


@dataclass(frozen=True)
class StreamDecl(Statement):
    kind_name: str
    stream_id: str
    neuron_id: str
    field_name: str


@dataclass(frozen=True)
class Weight(Statement):
    dst: Ref
    src: Ref
    value: float


@dataclass(frozen=True)
class UpdateWeightsStmt(Statement):
    """``target += rhs`` or, with ``rows`` set, ``target += [rhs] * [rows]``.

    In the short form the right-hand side holds either outputs (added to the
    target rows directly) or inputs (rows of the matrix to add).
    """

    target: tuple
    rhs: tuple
    rows: Optional[tuple] = None


@dataclass(frozen=True)
class Step(Statement):
    n: int = 1


@dataclass(frozen=True)
class Show(Statement):
    what: Union[str, Ref]


@dataclass(frozen=True)
class Seed(Statement):
    value: int


@dataclass(frozen=True)
class Gc(Statement):
    pass


SHOW_WORDS = ("matrix", "active", "tick", "trace")


def _terms(terms) -> str:
    return " + ".join(str(t) for t in terms)


def _pairs(pairs) -> str:
    return ", ".join(f"{a}:{b}" for a, b in pairs)


def print_statement(s: Statement) -> str:
    if isinstance(s, KindDecl):
        return f"#kind {', '.join(s.names)};"
    if isinstance(s, NewCellType):
        parts = [f"#newcelltype {s.type_name}"]
        parts += [f"#input {k}:{f}" for k, f in s.inputs]
        parts += [f"#output {k}:{f}" for k, f in s.outputs]
        return " ".join(parts) + ";"
    if isinstance(s, NeuronName):
        return f"#neuron {s.type_name}:{s.cell_name};"
    if isinstance(s, NeuronDecl):
        ins = f" {_pairs(s.inputs)}" if s.inputs else ""
        return f"#neuron {s.type_name}:{s.neuron_id} {_pairs(s.outputs)} = #transformof{ins};"
    if isinstance(s, StreamDecl):
        return f"#stream {s.kind_name}:{s.stream_id} = #neuroninput {s.neuron_id}.{s.field_name};"
    if isinstance(s, Weight):
        return f"#weight {s.dst} {s.src} = {fmt_real(s.value)};"
    if isinstance(s, UpdateWeightsStmt):
        if s.rows is None:
            return f"#updateweights {_terms(s.target)} += {_terms(s.rhs)};"
        return f"#updateweights {_terms(s.target)} += [{_terms(s.rhs)}] * [{_terms(s.rows)}];"
    if isinstance(s, Step):
        return f"#step {s.n};"
    if isinstance(s, Show):
        return f"#show {s.what};"
    if isinstance(s, Seed):
        return f"#seed {s.value};"
    if isinstance(s, Gc):
        return "#gc;"
    raise TypeError(f"not a statement: {s!r}")


def print_program(statements) -> str:
    return "".join(print_statement(s) + "\n" for s in statements)
