"""Driving a machine from the description language.

Declarations bind names and never change the network; only `#weight` and
`#updateweights` edit the matrix.
"""

from dmm.lang import Interpreter, parse_program, print_program

program = """
#neuron id_scalar:acc out:total = #transformof in:feed;
#neuron tanh:squash out:y = #transformof in:x;
#weight feed total = 1;
#weight feed one:b:out = 0.5;
#weight x total = 0.1;
#step 6;
#show total;
#show y;
#updateweights x += (-1) * x;     // remove the tanh neuron's inputs
#show active;
"""

print(print_program(parse_program(program)))

it = Interpreter()
for line in it.run(program):
    print(line)
