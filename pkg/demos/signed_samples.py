"""Linear combinations of sampled streams.

Samples can't be added, so a combination picks one term at random with
probability proportional to |coefficient| and flips the sign flag when the
coefficient is negative. The expected value matches the exact linear
combination of the underlying measures.
"""

from collections import Counter

import numpy as np

from dmm import SignedSample, StreamKind, linear_combine

kind = StreamKind("sample", "signed_sample")
rng = np.random.default_rng(0)
terms = [(0.3, SignedSample("apple")), (-0.7, SignedSample("pear"))]

draws = [linear_combine(kind, terms, rng) for _ in range(20_000)]
counts = Counter((d.payload, d.sign) for d in draws)
for (payload, sign), n in sorted(counts.items()):
    print(f"{payload:6s} sign={sign:+d}  frequency={n / len(draws):.4f}")

# A term with a missing (absent) sample is skipped.
print(linear_combine(kind, [(1.0, None), (0.5, SignedSample("plum"))], rng))
