"""An identity neuron with a unit self-loop adds up its constant input.

After tick n its output is (n - 1) * c: the constant source first emits at
the end of tick 1, and each value needs one tick to travel through the loop.
"""

from dmm import Machine, inport, outport

c = 2.5
m = Machine()
a_in, a_out = inport("id_scalar", "acc", "in"), outport("id_scalar", "acc", "out")
m.set_weight(a_in, a_out, 1.0)
m.set_weight(a_in, outport("one", "b", "out"), c)

for n in range(1, 9):
    m.step()
    print(f"tick {n}: output = {m.read_output(a_out):5g}   (n-1)*c = {(n - 1) * c:5g}")

# Cutting the feedback weight turns the accumulator into a plain relay.
m.set_weight(a_in, a_out, 0.0)
m.step(3)
print("after removing the self-loop:", m.read_output(a_out))
