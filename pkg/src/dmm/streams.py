"""Per-kind stream values and their linear combinations.

Values use plain Python/numpy representations, selected by the kind's shape:

=============  ==============================================
scalar         ``float``
vector         1-d ``numpy.ndarray`` of the kind's ``dim``
row_mask       :class:`MaskVector` over neuron inputs
column_mask    :class:`MaskVector` over neuron outputs
net_matrix     :class:`NetMatrix`
signed_sample  :class:`SignedSample` or ``None`` (no sample)
=============  ==============================================

Sampled signed measures are combined stochastically: one term is chosen with
probability proportional to ``|coef|`` and its sign flag is toggled when the
coefficient is negative.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Any, Hashable

import numpy as np

from .core import StreamKind, fmt_real
from .errors import KindMismatch
from .matrix import EMPTY, MaskVector, NetMatrix, combine_masks, combine_matrices

ABSENT = None


@dataclass(frozen=True)
class SignedSample:
    payload: Hashable
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def toggled(self) -> "SignedSample":
        return SignedSample(self.payload, -self.sign)


def zero_value(kind: StreamKind):
    shape = kind.shape
    if shape == "scalar":
        return 0.0
    if shape == "vector":
        return np.zeros(kind.dim)
    if shape in ("row_mask", "column_mask"):
        return MaskVector()
    if shape == "net_matrix":
        return EMPTY
    return ABSENT


def coerce_value(kind: StreamKind, v: Any):
    """Return ``v`` in canonical form for ``kind`` or raise :class:`KindMismatch`."""
    shape = kind.shape
    if shape == "scalar":
        if isinstance(v, numbers.Real) and not isinstance(v, bool):
            return float(v)
    elif shape == "vector":
        if isinstance(v, (np.ndarray, list, tuple)):
            arr = np.asarray(v, dtype=float)
            if arr.shape == (kind.dim,):
                return arr
    elif shape in ("row_mask", "column_mask"):
        if isinstance(v, MaskVector):
            return v
    elif shape == "net_matrix":
        if isinstance(v, NetMatrix):
            return v
    elif v is ABSENT or isinstance(v, SignedSample):
        return v
    raise KindMismatch(f"value {v!r} does not belong to kind {kind.name} ({shape})")


def linear_combine(kind: StreamKind, terms, rng: np.random.Generator):
    """Combine ``[(coef, value), ...]`` of one kind.

    Exact for every shape except signed samples, which draw from ``rng``.
    """
    terms = [(float(c), coerce_value(kind, v)) for c, v in terms]
    shape = kind.shape
    if shape == "scalar":
        total = 0.0
        for c, v in terms:
            total += c * v
        return total
    if shape == "vector":
        total = np.zeros(kind.dim)
        for c, v in terms:
            total += c * v
        return total
    if shape in ("row_mask", "column_mask"):
        return combine_masks(terms)
    if shape == "net_matrix":
        return combine_matrices(terms)
    return _stochastic_sum(terms, rng)


def _stochastic_sum(terms, rng):
    live = [(c, s) for c, s in terms if c != 0.0 and s is not ABSENT]
    if not live:
        return ABSENT
    if len(live) == 1:
        i = 0
    else:
        weights = np.array([abs(c) for c, _ in live])
        u = rng.random() * weights.sum()
        i = int(np.searchsorted(np.cumsum(weights), u, side="right"))
        i = min(i, len(live) - 1)
    c, s = live[i]
    return s.toggled() if c < 0 else s


def scale_value(kind: StreamKind, c: float, v, rng: np.random.Generator):
    return linear_combine(kind, [(c, v)], rng)


def render_value(kind: StreamKind, v):
    """JSON-ready rendering used by traces and ``#show``."""
    shape = kind.shape
    if shape == "scalar":
        return float(v)
    if shape == "vector":
        return [float(x) for x in v]
    if shape in ("row_mask", "column_mask"):
        return {
            "entries": [[str(p), float(w)] for p, w in v.sorted_entries()],
            "ones": v.ones,
        }
    if shape == "net_matrix":
        return [[str(r), str(c), float(w)] for r, c, w in v.entries()]
    if v is ABSENT:
        return None
    payload = v.payload
    if not isinstance(payload, (str, int, float)):
        payload = repr(payload)
    return {"payload": payload, "sign": "+" if v.sign > 0 else "-"}


def format_value(kind: StreamKind, v) -> str:
    """Compact one-line text form for the REPL."""
    shape = kind.shape
    if shape == "scalar":
        return fmt_real(v)
    if shape == "vector":
        return "[" + ", ".join(fmt_real(x) for x in v) + "]"
    if shape in ("row_mask", "column_mask"):
        body = ", ".join(f"{p}={fmt_real(w)}" for p, w in v.sorted_entries())
        tail = f"; ones over {v.ones}" if v.ones else ""
        return "{" + body + tail + "}"
    if shape == "net_matrix":
        return "{" + ", ".join(f"{r} <- {c} = {fmt_real(w)}" for r, c, w in v.entries()) + "}"
    if v is ABSENT:
        return "absent"
    return f"{'+' if v.sign > 0 else '-'}{v.payload}"
