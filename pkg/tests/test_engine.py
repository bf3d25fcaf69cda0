import random

import numpy as np
import pytest

from dmm import Machine, MaskVector, NeuronType, Transform, UpdateSpec, inport, outport, register_type
from dmm.engine import SELF, SELF_IN, SELF_OUT, SetWeight, UpdateWeights, default_signature
from dmm.errors import CrossKindWeight, InvalidSignature, MachineHalted, MalformedMask, TransformFailure, UnknownPort
from dmm.matrix import NetMatrix, all_ones
from oracles import dense_rnn, pulse_scenario

ONE = outport("one", "b", "out")


def acc(cell="a"):
    return inport("id_scalar", cell, "in"), outport("id_scalar", cell, "out")


def test_new_machine():
    m = Machine(seed=0)
    assert m.t == 0
    assert m.active == {SELF}
    assert m.read_output(SELF_OUT) == NetMatrix({SELF_IN: {SELF_OUT: 1.0}})
    assert m.read_output(outport("sigmoid", "z", "out")) == 0.0
    with pytest.raises(UnknownPort):
        m.read_output(outport("sigmoid", "z", "bogus"))
    with pytest.raises(UnknownPort):
        m.read_output(outport("nosuch", "z", "out"))


def test_invalid_signature():
    sig, reg = default_signature()
    del sig.types["id_net_matrix"]
    with pytest.raises(InvalidSignature):
        Machine(sig, reg)


def test_self_fixed_point():
    m = Machine()
    A0 = m.matrix
    m.step(25)
    assert m.matrix == A0
    assert m.t == 25


def test_accumulator_law():
    m = Machine()
    a_in, a_out = acc()
    m.set_weight(a_in, a_out, 1.0)
    m.set_weight(a_in, ONE, 0.75)
    for n in range(1, 60):
        m.step(1)
        assert m.read_output(a_out) == (n - 1) * 0.75


def test_identity_delay():
    """A source value reaches an identity output one tick after it is emitted."""
    m = Machine()
    a_in, a_out = acc()
    m.set_weight(a_in, ONE, 2.0)
    seen = []
    for _ in range(3):
        m.step()
        seen.append((m.read_output(ONE), m.read_input(a_in), m.read_output(a_out)))
    assert seen == [(1.0, 0.0, 0.0), (1.0, 2.0, 2.0), (1.0, 2.0, 2.0)]


def test_step_composition():
    def build():
        m = Machine()
        a_in, a_out = acc()
        m.set_weight(a_in, a_out, 0.9)
        m.set_weight(a_in, ONE, 1.0)
        return m

    m1, m2 = build(), build()
    m1.step(1).step(1)
    m2.step(2)
    assert m1.snapshot().to_json() == m2.snapshot().to_json()


def test_down_stroke_vs_dense_oracle():
    rnd = random.Random(4)
    cells = ["n0", "n1", "n2", "n3"]
    ins = [inport("linear", c, "in") for c in cells]
    outs = [outport("linear", c, "out") for c in cells]
    W = np.array([[rnd.uniform(-1, 1) for _ in cells] for _ in cells])
    b = np.array([rnd.uniform(-1, 1) for _ in cells])
    m = Machine()
    for i in range(4):
        m.set_weight(ins[i], ONE, b[i])
        for j in range(4):
            m.set_weight(ins[i], outs[j], W[i, j])
    m.step(5)
    y = np.array([m.read_output(o) for o in outs])
    m.down_stroke()
    got = np.array([m.read_input(r) for r in ins])
    assert np.allclose(got, W @ y + b, rtol=0, atol=1e-12)


def test_sigmoid_rnn_vs_dense():
    rnd = random.Random(9)
    W = [[rnd.uniform(-2, 2) for _ in range(3)] for _ in range(3)]
    b = [rnd.uniform(-1, 1) for _ in range(3)]
    m = Machine()
    for i in range(3):
        m.set_weight(inport("sigmoid", f"s{i}", "in"), ONE, b[i])
        for j in range(3):
            m.set_weight(inport("sigmoid", f"s{i}", "in"), outport("sigmoid", f"s{j}", "out"), W[i][j])
    ref = dense_rnn(W, b, 100)
    for t in range(100):
        m.step()
        y = [m.read_output(outport("sigmoid", f"s{i}", "out")) for i in range(3)]
        assert np.allclose(y, ref[t], rtol=0, atol=1e-12)


def test_activation_rule():
    m = Machine()
    a_in, a_out = acc()
    m.step(2)
    m.set_weight(a_in, ONE, 1.0)
    assert ("id_scalar", "a") in m.active and ("one", "b") in m.active
    # just activated: outputs read zero until the first up stroke
    assert m.read_output(ONE) == 0.0 and m.read_output(a_out) == 0.0
    m.step()
    assert m.read_output(ONE) == 1.0
    assert m.read_output(a_out) == 0.0


def test_transform_never_runs_before_down_stroke():
    sig, reg = default_signature()
    calls = []

    def step(state, inputs, rng):
        calls.append(inputs[0])
        return state, [inputs[0]]

    register_type(sig, reg, NeuronType("probe", [("in", "scalar")], [("out", "scalar")]), Transform(1, 1, step))
    m = Machine(sig, reg)
    m.set_weight(inport("probe", "p", "in"), ONE, 3.0)
    assert calls == []
    m.step(2)
    assert calls == [0.0, 3.0]


def test_apply_edit_updateweights_forms():
    m = Machine()
    r, _ = acc("r")
    o1, o2 = outport("id_scalar", "x", "out"), outport("id_scalar", "y", "out")
    # add alpha-weighted outputs to row r through the fake row
    spec = UpdateSpec(MaskVector({r: 1.0}), MaskVector({o1: 0.5, o2: -1.5}), MaskVector(), fake_row=1.0)
    m.apply_edit(UpdateWeights(spec))
    assert dict(m.matrix.row(r)) == {o1: 0.5, o2: -1.5}
    # subtract the row from itself
    m.apply_edit(UpdateWeights(UpdateSpec(MaskVector({r: 1.0}), all_ones("scalar"), MaskVector({r: -1.0}))))
    assert m.matrix.row(r) == {}
    assert ("id_scalar", "r") not in m.active
    with pytest.raises(CrossKindWeight):
        m.apply_edit(SetWeight(r, SELF_OUT, 1.0))
    with pytest.raises(MalformedMask):
        m.apply_edit(UpdateWeights(UpdateSpec(MaskVector({r: 1.0}), all_ones("net_matrix"), MaskVector())))


def test_self_modification_differential():
    k_fire = 3
    edited, x_out, _ = pulse_scenario(fire_at=(k_fire,))
    clone, _, _ = pulse_scenario(fire_at=())
    mat_diff, x_diff = [], []
    for t in range(1, 12):
        edited.step()
        clone.step()
        mat_diff.append(edited.matrix != clone.matrix)
        x_diff.append(edited.read_output(x_out) != clone.read_output(x_out))
    # pulse emitted at end of tick 3 -> gate read at tick 4 -> delta at end of 4 -> A changes at end of 5
    k = k_fire + 2
    assert mat_diff == [False] * (k - 1) + [True] * (11 - k + 1)
    assert x_diff == [False] * k + [True] * (11 - k)


def test_gc_transparency():
    def build():
        m = Machine()
        a_in, a_out = acc("a")
        b_in, b_out = inport("tanh", "b", "in"), outport("tanh", "b", "out")
        m.set_weight(a_in, ONE, 0.5)
        m.set_weight(a_in, a_out, 0.5)
        m.set_weight(b_in, a_out, 1.0)
        m.step(7)
        m.set_weight(b_in, a_out, 0.0)
        return m

    plain, collected = build(), build()
    assert ("tanh", "b") not in plain.active
    assert ("tanh", "b") in plain.states
    collected.garbage_collect()
    assert ("tanh", "b") not in collected.states
    once = collected.footprint()
    collected.garbage_collect()
    assert collected.footprint() == once
    t1, t2 = [], []
    for _ in range(50):
        plain.step()
        collected.step()
        t1.append(plain.snapshot().to_json())
        t2.append(collected.snapshot().to_json())
    assert t1 == t2


def test_gc_fresh_machine_keeps_self():
    m = Machine().garbage_collect()
    assert m.active == {SELF} and set(m.states) == {SELF}


def test_inactive_machine_constant_trace():
    m = Machine()
    m.step()
    first = m.snapshot().entries
    for _ in range(10):
        m.step()
        assert m.snapshot().entries == first


def test_footprint_scales_with_support():
    m = Machine().step(1)
    base = m.footprint()
    m.set_weight(inport("id_scalar", "far_away_cell", "in"), outport("id_scalar", "another", "out"), 1.0)
    m.step(3)
    # one entry, two neurons with one input and one output each
    assert m.footprint() - base == 1 + 2 + 2 + 2 + 2


def test_transform_failure_halts():
    sig, reg = default_signature()

    def boom(state, inputs, rng):
        raise RuntimeError("boom")

    register_type(sig, reg, NeuronType("boom", [], [("out", "scalar")]), Transform(0, 1, boom))
    register_type(sig, reg, NeuronType("liar", [], [("out", "scalar")]),
                  Transform(0, 1, lambda s, i, r: (s, [np.zeros(2)])))
    m = Machine(sig, reg)
    m.set_weight(inport("id_scalar", "a", "in"), outport("boom", "x", "out"), 1.0)
    with pytest.raises(TransformFailure) as exc:
        m.step()
    assert exc.value.neuron == ("boom", "x") and exc.value.tick == 1
    with pytest.raises(MachineHalted):
        m.step()
    m2 = Machine(sig, reg)
    m2.set_weight(inport("id_scalar", "a", "in"), outport("liar", "x", "out"), 1.0)
    with pytest.raises(TransformFailure):
        m2.step()


def test_seeded_replay_with_samples():
    from dmm import StreamKind
    from dmm.neurons import builtin_identity, builtin_sampler

    def build(seed):
        sig, reg = default_signature()
        kind = StreamKind("sample", "signed_sample", payload_space="token")
        sig.add_kind(kind)
        register_type(sig, reg, NeuronType("src", [], [("out", "sample")]),
                      builtin_sampler(kind, ["a", "b", "c"]))
        register_type(sig, reg, NeuronType("id_sample", [("in", "sample")], [("out", "sample")]),
                      builtin_identity(kind))
        m = Machine(sig, reg, seed=seed)
        r = inport("id_sample", "mix", "in")
        m.set_weight(r, outport("src", "p", "out"), 0.3)
        m.set_weight(r, outport("src", "q", "out"), -0.7)
        m.step(40)
        return [m.snapshot().to_json()]

    assert build(5) == build(5)
    assert build(5) != build(6)
