"""Neuron transforms, the transform registry and the built-in neuron types.

A transform is an explicit-state step function.  At every tick the engine
hands it the values its inputs received on the preceding down stroke and
stores what it returns as the neuron's outputs, so an output at tick ``t``
only ever depends on inputs computed from tick ``t-1`` outputs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .core import NeuronType, Signature, StreamKind
from .errors import ArityMismatch, DMMError, DuplicateType, KindMismatch
from .matrix import EMPTY, UpdateSpec, update_kernel
from .streams import SignedSample, coerce_value, scale_value, zero_value

log = logging.getLogger(__name__)

StepFn = Callable[[Any, Sequence, np.random.Generator], tuple]


@dataclass(frozen=True)
class Transform:
    """``step(state, inputs, rng) -> (state, outputs)`` with fixed arities."""

    n_inputs: int
    n_outputs: int
    step: StepFn
    initial_state: Any = None


class Registry:
    """Host-supplied implementations: transforms by id and stream kinds by name."""

    def __init__(self):
        self.transforms: dict[str, Transform] = {}
        self.kinds: dict[str, StreamKind] = {}

    def bind(self, transform_id: str, transform: Transform) -> None:
        self.transforms[transform_id] = transform

    def provide_kind(self, kind: StreamKind) -> None:
        self.kinds[kind.name] = kind

    def transform_for(self, decl: NeuronType) -> Transform:
        return self.transforms[decl.transform_id]


def check_arity(decl: NeuronType, t: Transform) -> None:
    if t.n_inputs != len(decl.inputs) or t.n_outputs != len(decl.outputs):
        raise ArityMismatch(
            f"type {decl.type_name} has {len(decl.inputs)} inputs/{len(decl.outputs)} outputs, "
            f"transform has {t.n_inputs}/{t.n_outputs}"
        )


def register_type(sig: Signature, reg: Registry, decl: NeuronType, t: Transform) -> None:
    if decl.type_name in sig.types:
        raise DuplicateType(f"neuron type {decl.type_name} already declared")
    check_arity(decl, t)
    sig.add_type(decl)
    reg.bind(decl.transform_id, t)


def run_transform(t: Transform, input_log, rng=None):
    """Feed a list of per-tick input tuples through ``t``; return the per-tick outputs."""
    rng = rng if rng is not None else np.random.default_rng(0)
    state = t.initial_state
    out = []
    for inputs in input_log:
        state, outputs = t.step(state, list(inputs), rng)
        out.append(list(outputs))
    return out


# built-ins


def builtin_identity(kind: StreamKind) -> Transform:
    def step(state, inputs, rng):
        return state, [inputs[0]]

    return Transform(1, 1, step)


def _sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


SCALAR_FUNCTIONS = {
    "sigmoid": _sigmoid,
    "tanh": math.tanh,
    "relu": lambda x: x if x > 0 else 0.0,
    "linear": lambda x: x,
}


def builtin_scalar(name: str) -> Transform:
    f = SCALAR_FUNCTIONS[name]

    def step(state, inputs, rng):
        return state, [float(f(inputs[0]))]

    return Transform(1, 1, step)


def builtin_gated(kind: StreamKind) -> Transform:
    """Inputs (value, mask); output is value scaled by the scalar mask."""
    zero = zero_value(kind)

    def step(state, inputs, rng):
        value, mask = inputs
        if mask == 0.0:
            return state, [zero]
        if mask == 1.0:
            return state, [value]
        return state, [scale_value(kind, mask, value, rng)]

    return Transform(2, 1, step)


def builtin_const(kind: StreamKind, v) -> Transform:
    v = coerce_value(kind, v)

    def step(state, inputs, rng):
        return state, [v]

    return Transform(0, 1, step)


def builtin_pulse(fire_at, value: float = 1.0) -> Transform:
    """Scalar source emitting ``value`` on its n-th firing for n in ``fire_at``, else 0."""
    fire_at = frozenset(fire_at)

    def step(count, inputs, rng):
        count += 1
        return count, [value if count in fire_at else 0.0]

    return Transform(0, 1, step, initial_state=0)


def builtin_sampler(kind: StreamKind, payloads, probs=None) -> Transform:
    """Source of positive samples drawn from a finite distribution over ``payloads``."""
    if kind.shape != "signed_sample":
        raise KindMismatch(f"sampler needs a signed_sample kind, got {kind.name}")
    payloads = list(payloads)
    p = None if probs is None else np.asarray(probs, dtype=float)

    def step(state, inputs, rng):
        i = int(rng.choice(len(payloads), p=p))
        return state, [SignedSample(payloads[i], 1)]

    return Transform(0, 1, step)


def builtin_updateweights(sig: Signature) -> Transform:
    """Higher-order neuron: inputs (matrix, gamma, beta, alpha, gate), output a matrix delta.

    A malformed mask combination yields an empty delta; the diagnostic is
    appended to the neuron's state (a tuple of messages) and logged.
    """

    def step(state, inputs, rng):
        M, gamma, beta, alpha, gate = inputs
        if gate == 0.0:
            return state, [EMPTY]
        try:
            spec = UpdateSpec(gamma, alpha, beta, gate)
            delta = update_kernel(M, spec, sig)
        except DMMError as exc:
            log.warning("updateweights: %s", exc)
            return state + (str(exc),), [EMPTY]
        return state, [delta]

    return Transform(5, 1, step, initial_state=())


UPDATEWEIGHTS_INPUTS = (
    ("matrix", "net_matrix"),
    ("gamma", "row_mask"),
    ("beta", "row_mask"),
    ("alpha", "column_mask"),
    ("gate", "scalar"),
)
