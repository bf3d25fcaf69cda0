"""Sparse countable network matrix, mask vectors and the row-update kernel.

The matrix is stored row-major as ``{input port: {output port: weight}}``.
Only nonzero weights are stored and every stored entry connects two ports of
the same stream kind.  Values are treated as immutable: every operation
returns a new :class:`NetMatrix` and shares untouched rows with its argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .core import INPUT, OUTPUT, PortName, Signature, fmt_real
from .errors import CrossKindWeight, MalformedMask, MaskTailConflict, PortDirectionError


class NetMatrix:
    __slots__ = ("_rows",)

    def __init__(self, rows: Optional[Mapping] = None):
        clean = {}
        for r, row in (rows or {}).items():
            kept = {c: float(w) for c, w in row.items() if w != 0}
            if kept:
                clean[r] = kept
        self._rows = clean

    @classmethod
    def _wrap(cls, rows: dict) -> "NetMatrix":
        m = cls.__new__(cls)
        m._rows = rows
        return m

    def row(self, r: PortName) -> Mapping[PortName, float]:
        return self._rows.get(r, {})

    def rows(self):
        return self._rows.items()

    def entries(self) -> Iterator[tuple[PortName, PortName, float]]:
        """All stored entries, rows and columns in port order."""
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    def __len__(self):
        return sum(len(row) for row in self._rows.values())

    def __bool__(self):
        return bool(self._rows)

    def __eq__(self, other):
        if not isinstance(other, NetMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        return hash(frozenset((r, c, w) for r, c, w in self.entries()))

    def __repr__(self):
        return f"NetMatrix({len(self)} entries)"

    def dense(self, row_ports, col_ports):
        """Dense numpy copy restricted to the given port lists."""
        import numpy as np

        out = np.zeros((len(row_ports), len(col_ports)))
        ci = {c: j for j, c in enumerate(col_ports)}
        for i, r in enumerate(row_ports):
            for c, w in self.row(r).items():
                out[i, ci[c]] = w
        return out


EMPTY = NetMatrix()


def get_weight(A: NetMatrix, r: PortName, c: PortName) -> float:
    return A.row(r).get(c, 0.0)


def check_pair(sig: Signature, r: PortName, c: PortName) -> None:
    if r.direction != INPUT:
        raise PortDirectionError(f"row port {r} must be a neuron input")
    if c.direction != OUTPUT:
        raise PortDirectionError(f"column port {c} must be a neuron output")
    kr, kc = sig.port_kind(r), sig.port_kind(c)
    if kr.name != kc.name:
        raise CrossKindWeight(
            f"cannot connect {c} (kind {kc.name}) to {r} (kind {kr.name}): kinds differ"
        )


def set_weight(A: NetMatrix, r: PortName, c: PortName, w: float, sig: Signature) -> NetMatrix:
    check_pair(sig, r, c)
    w = float(w)
    rows = dict(A._rows)
    row = dict(rows.get(r, {}))
    if w == 0.0:
        row.pop(c, None)
    else:
        row[c] = w
    if row:
        rows[r] = row
    else:
        rows.pop(r, None)
    return NetMatrix._wrap(rows)


def add_scaled(A: NetMatrix, B: NetMatrix, s: float) -> NetMatrix:
    """A + s*B with zeros pruned."""
    s = float(s)
    if s == 0.0 or not B:
        return A
    rows = dict(A._rows)
    for r, brow in B._rows.items():
        row = dict(rows.get(r, {}))
        for c, w in brow.items():
            v = row.get(c, 0.0) + s * w
            if v == 0.0:
                row.pop(c, None)
            else:
                row[c] = v
        if row:
            rows[r] = row
        else:
            rows.pop(r, None)
    return NetMatrix._wrap(rows)


def combine_matrices(terms) -> NetMatrix:
    out = EMPTY
    for coef, M in terms:
        out = add_scaled(out, M, coef)
    return out


def active_ports(A: NetMatrix) -> tuple[set, set]:
    rows = set(A._rows)
    cols = set()
    for row in A._rows.values():
        cols.update(row)
    return rows, cols


def dump_matrix(A: NetMatrix) -> str:
    """Tab-separated ``row  column  weight`` lines in port order."""
    return "".join(f"{r}\t{c}\t{fmt_real(w)}\n" for r, c, w in A.entries())


# masks


@dataclass(frozen=True)
class MaskVector:
    """Finitely describable vector over ports of one kind.

    ``ones`` names a stream kind when the vector has an infinite tail of ones
    over that kind's ports; ``entries`` then holds only the ports whose value
    differs from 1.  With ``ones=None`` the tail is zero and ``entries`` is the
    nonzero support.
    """

    entries: Mapping[PortName, float] = field(default_factory=dict)
    ones: Optional[str] = None

    def __post_init__(self):
        tail = self.tail_value
        clean = {p: float(v) for p, v in self.entries.items() if v != tail}
        object.__setattr__(self, "entries", clean)

    @property
    def tail_value(self) -> float:
        return 1.0 if self.ones is not None else 0.0

    @property
    def finite(self) -> bool:
        return self.ones is None

    def value(self, p: PortName) -> float:
        # p is assumed to be of the mask's kind
        return self.entries.get(p, self.tail_value)

    def __hash__(self):
        return hash((frozenset(self.entries.items()), self.ones))

    def sorted_entries(self):
        return sorted(self.entries.items())


def all_ones(kind_name: str) -> MaskVector:
    return MaskVector({}, kind_name)


def combine_masks(terms) -> MaskVector:
    """Exact linear combination of masks.

    Tails combine only when the ones-tail coefficients sum to 0 or 1, so the
    result stays in canonical form.
    """
    tail_coef = 0.0
    tail_kinds = set()
    acc: dict[PortName, float] = {}
    for coef, m in terms:
        coef = float(coef)
        if coef == 0.0:
            continue
        if m.ones is not None:
            tail_coef += coef
            tail_kinds.add(m.ones)
        for p in m.entries:
            acc.setdefault(p, 0.0)
    if len(tail_kinds) > 1:
        raise MalformedMask(f"cannot combine all-ones tails of kinds {sorted(tail_kinds)}")
    if math.isclose(tail_coef, 0.0, abs_tol=1e-12):
        ones = None
    elif math.isclose(tail_coef, 1.0, abs_tol=1e-12):
        ones = tail_kinds.pop()
    else:
        raise MaskTailConflict(f"all-ones tails combine to coefficient {tail_coef!r}")
    for p in acc:
        acc[p] = sum(float(c) * m.value(p) for c, m in terms if c != 0)
    return MaskVector(acc, ones)


def mask_kind(mask: MaskVector, sig: Signature, direction: str) -> Optional[str]:
    """Kind name of a mask (None for the empty finite mask); enforces one kind and one direction."""
    kinds = set()
    if mask.ones is not None:
        kinds.add(mask.ones)
    for p in mask.entries:
        if p.direction != direction:
            raise MalformedMask(f"mask entry {p} is not a neuron {direction}")
        kinds.add(sig.port_kind(p).name)
    if len(kinds) > 1:
        raise MalformedMask(f"mask mixes stream kinds {sorted(kinds)}")
    return kinds.pop() if kinds else None


def left_multiply(beta: MaskVector, A: NetMatrix) -> dict[PortName, float]:
    """Row vector sum_k beta_k * A[k, :] as a sparse map over output ports."""
    if not beta.finite:
        raise MalformedMask("left mask must be finite")
    out: dict[PortName, float] = {}
    for k, b in beta.entries.items():
        for c, w in A.row(k).items():
            out[c] = out.get(c, 0.0) + b * w
    return {c: v for c, v in out.items() if v != 0.0}


@dataclass(frozen=True)
class UpdateSpec:
    """Masks of one row update ``a_ij += gate * gamma_i * alpha_j * (sum_k beta_k a_kj + fake_row)``.

    ``fake_row`` is the coefficient of a synthetic all-ones row over the
    kind's outputs; it lets a finite ``alpha`` be added to rows directly.
    """

    gamma: MaskVector
    alpha: MaskVector
    beta: MaskVector
    gate: float = 1.0
    fake_row: float = 0.0

    def __post_init__(self):
        if not self.gamma.finite:
            raise MalformedMask("target row mask must be finite")
        if not self.beta.finite:
            raise MalformedMask("source row mask must be finite")
        if self.fake_row != 0.0 and not self.alpha.finite:
            raise MalformedMask("fake input row needs a finite column mask")

    def check(self, sig: Signature) -> Optional[str]:
        """Validate the single-kind discipline against ``sig``; return the shared kind."""
        kinds = {
            mask_kind(self.gamma, sig, INPUT),
            mask_kind(self.beta, sig, INPUT),
            mask_kind(self.alpha, sig, OUTPUT),
        }
        kinds.discard(None)
        if len(kinds) > 1:
            raise MalformedMask(f"update masks use different kinds {sorted(kinds)}")
        return kinds.pop() if kinds else None


def update_kernel(A: NetMatrix, u: UpdateSpec, sig: Optional[Signature] = None) -> NetMatrix:
    """The delta matrix of one row update (add it to ``A`` to apply)."""
    if sig is not None:
        u.check(sig)
    if u.gate == 0.0 or not u.gamma.entries:
        return EMPTY
    combo = left_multiply(u.beta, A)
    if u.fake_row != 0.0:
        for j in u.alpha.entries:
            combo[j] = combo.get(j, 0.0) + u.fake_row
    scaled = {}
    for j, v in combo.items():
        a = u.alpha.value(j)
        if a != 0.0 and v != 0.0:
            scaled[j] = a * v
    if not scaled:
        return EMPTY
    rows = {}
    for i, g in u.gamma.entries.items():
        f = u.gate * g
        row = {j: f * w for j, w in scaled.items()}
        rows[i] = {j: w for j, w in row.items() if w != 0.0}
    return NetMatrix._wrap({i: r for i, r in rows.items() if r})
