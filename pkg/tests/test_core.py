import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmm import NeuronType, PortName, Signature, StreamKind, compare_ports, inport, outport, validate_name
from dmm.core import fmt_real, port_kind
from dmm.engine import NET_MATRIX, SELF_IN, SELF_OUT, default_signature
from dmm.errors import (
    DuplicateType,
    EmptyName,
    ForbiddenCharacter,
    UnknownField,
    UnknownKind,
    UnknownType,
)

name_text = st.text(alphabet="abcXYZ019_", min_size=1, max_size=6)


def test_validate_name_ok():
    assert validate_name("relu_1") == "relu_1"


@pytest.mark.parametrize("text, position", [("a:b", 1), ("x y", 1), ("#k", 0), ("a,b", 1),
                                            ("a=b", 1), ("ab;", 2), ("g0.out", 2), ("é", 0)])
def test_validate_name_forbidden(text, position):
    with pytest.raises(ForbiddenCharacter) as exc:
        validate_name(text)
    assert exc.value.position == position


def test_validate_name_empty():
    with pytest.raises(EmptyName):
        validate_name("")


@given(name_text)
def test_validate_name_idempotent(text):
    assert validate_name(validate_name(text)) == text


def test_port_kind():
    sig, _ = default_signature()
    assert port_kind(sig, SELF_IN) == NET_MATRIX
    assert port_kind(sig, SELF_OUT) == NET_MATRIX
    assert port_kind(sig, outport("sigmoid", "c", "out")).shape == "scalar"
    with pytest.raises(UnknownType):
        port_kind(sig, outport("nosuch", "c", "out"))
    with pytest.raises(UnknownField):
        port_kind(sig, outport("sigmoid", "c", "nosuch"))
    with pytest.raises(UnknownField):
        # field exists, but as an input
        port_kind(sig, outport("sigmoid", "c", "in"))


def test_compare_ports_basic():
    x = outport("a", "_", "f")
    assert compare_ports(x, x) == 0
    assert compare_ports(outport("a", "_", "f"), outport("b", "_", "f")) == -1
    assert compare_ports(outport("b", "_", "f"), outport("a", "_", "f")) == 1
    # direction breaks ties
    assert compare_ports(inport("a", "c", "f"), outport("a", "c", "f")) == -1


def test_sort_matches_naive_oracle():
    ports = [outport("b", "x", "f"), inport("a", "y", "g"), outport("a", "y", "a")]

    def naive_key(p):
        return (p.type_name, p.cell_name, p.field_name, p.direction)

    expected = sorted(ports, key=naive_key)
    for perm in itertools.permutations(ports):
        assert sorted(perm) == expected


ports = st.builds(PortName, name_text, name_text, name_text, st.sampled_from(["input", "output"]))


@given(ports, ports, ports)
def test_compare_ports_is_total_order(a, b, c):
    assert compare_ports(a, b) == -compare_ports(b, a)
    assert (compare_ports(a, b) == 0) == (a == b)
    if compare_ports(a, b) <= 0 and compare_ports(b, c) <= 0:
        assert compare_ports(a, c) <= 0


def test_signature_rules():
    sig = Signature([StreamKind("scalar", "scalar")])
    sig.add_type(NeuronType("src", [], [("out", "scalar")]))
    with pytest.raises(DuplicateType):
        sig.add_type(NeuronType("src", [], [("out", "scalar")]))
    with pytest.raises(UnknownKind):
        sig.add_type(NeuronType("bad", [("in", "vec9")], [("out", "scalar")]))
    with pytest.raises(ValueError):
        NeuronType("noout", [("in", "scalar")], [])
    with pytest.raises(ValueError):
        NeuronType("dup", [("x", "scalar")], [("x", "scalar")])
    with pytest.raises(ValueError):
        StreamKind("v0", "vector", dim=0)


@pytest.mark.parametrize("x, text", [(0.0, "0"), (1.0, "1"), (-2.0, "-2"), (0.5, "0.5"),
                                     (0.1, "0.1"), (1e20, "1e+20"), (-1e-7, "-1e-07")])
def test_fmt_real(x, text):
    assert fmt_real(x) == text
    assert float(text) == x


def test_fmt_real_round_trips():
    rnd = random.Random(3)
    for _ in range(1000):
        x = rnd.uniform(-1e6, 1e6) * 10 ** rnd.randint(-20, 20)
        assert float(fmt_real(x)) == x
