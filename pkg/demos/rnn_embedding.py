"""A three-neuron sigmoid RNN written as a matrix machine.

The recurrent weights W and the bias b live in one sparse matrix: W_ij is the
weight from neuron j's output to neuron i's input, and b_i is the weight from
the constant source `one:b`. We compare against the usual dense recurrence.
"""

import numpy as np

from dmm import Machine, inport, outport

rng = np.random.default_rng(3)
W = rng.uniform(-2, 2, size=(3, 3))
b = rng.uniform(-1, 1, size=3)

m = Machine()
ins = [inport("sigmoid", f"h{i}", "in") for i in range(3)]
outs = [outport("sigmoid", f"h{i}", "out") for i in range(3)]
for i in range(3):
    m.set_weight(ins[i], outport("one", "b", "out"), b[i])
    for j in range(3):
        m.set_weight(ins[i], outs[j], W[i, j])

print(m.dump())

# The bias source emits for the first time at the end of tick 1, so the
# reference starts from sigmoid(0).
sigmoid = lambda x: 1 / (1 + np.exp(-x))
y = sigmoid(np.zeros(3))
worst = 0.0
for t in range(1, 51):
    m.step()
    got = np.array([m.read_output(o) for o in outs])
    worst = max(worst, np.abs(got - y).max())
    if t % 10 == 0:
        print(f"t={t:3d}  machine={np.round(got, 6)}  dense={np.round(y, 6)}")
    y = sigmoid(W @ y + b)

print("max abs difference:", worst)
