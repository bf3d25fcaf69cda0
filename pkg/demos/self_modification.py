"""A network that rewrites its own weights.

An `updateweights` neuron reads the current matrix from Self, computes a
masked rank-one delta, and feeds it back into Self's input. Here the delta
adds row y.in into row x.in, so x starts listening to everything y listens
to. The gate is a pulse that fires once; we run the same wiring with and
without the pulse and watch where the two runs part ways.
"""

from dmm import Machine, MaskVector, NeuronType, inport, outport, register_type
from dmm.engine import COLUMN_MASK, ROW_MASK, SELF_IN, SELF_OUT, default_signature
from dmm.matrix import all_ones
from dmm.neurons import builtin_const, builtin_pulse

x_in, x_out = inport("tanh", "x", "in"), outport("tanh", "x", "out")
y_in, y_out = inport("tanh", "y", "in"), outport("tanh", "y", "out")


def build(fire_at):
    sig, reg = default_signature()
    # constant mask sources: which rows to change (gamma), which row to add (beta),
    # and an all-ones column selector (alpha)
    register_type(sig, reg, NeuronType("gamma_src", [], [("out", "row_mask")]),
                  builtin_const(ROW_MASK, MaskVector({x_in: 1.0})))
    register_type(sig, reg, NeuronType("beta_src", [], [("out", "row_mask")]),
                  builtin_const(ROW_MASK, MaskVector({y_in: 1.0})))
    register_type(sig, reg, NeuronType("alpha_src", [], [("out", "column_mask")]),
                  builtin_const(COLUMN_MASK, all_ones("scalar")))
    register_type(sig, reg, NeuronType("pulse", [], [("out", "scalar")]), builtin_pulse(fire_at))

    m = Machine(sig, reg)
    bias = outport("one", "b", "out")
    m.set_weight(x_in, bias, 0.5)
    m.set_weight(x_in, x_out, 0.3)
    m.set_weight(y_in, bias, -1.0)
    m.set_weight(y_in, x_out, 0.8)

    def u(field):
        return inport("updateweights", "u", field)

    m.set_weight(u("matrix"), SELF_OUT, 1.0)
    m.set_weight(u("gamma"), outport("gamma_src", "s", "out"), 1.0)
    m.set_weight(u("beta"), outport("beta_src", "s", "out"), 1.0)
    m.set_weight(u("alpha"), outport("alpha_src", "s", "out"), 1.0)
    m.set_weight(u("gate"), outport("pulse", "p", "out"), 1.0)
    m.set_weight(SELF_IN, outport("updateweights", "u", "out"), 1.0)
    return m


edited, control = build(fire_at=[3]), build(fire_at=[])
for t in range(1, 10):
    edited.step()
    control.step()
    flag = "matrix differs" if edited.matrix != control.matrix else ""
    print(f"t={t}  x(edited)={edited.read_output(x_out):+.6f}  "
          f"x(control)={control.read_output(x_out):+.6f}  {flag}")

print("\nrow x.in after the edit:")
for col, w in sorted(edited.matrix.row(x_in).items()):
    print(f"  {col}  {w:g}")
