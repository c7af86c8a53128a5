"""Words, the four basic operators, and freeness of the factors."""

import random

from freefock import toy, words
from freefock.cli import random_alternating

# adapted words: neighbouring letters sit on different sites
print(words.enumerate_adapted(2, 1, 2))
for m in (2, 3, 4):
    print(m, "sites:", [words.adapted_count(m, 1, L) for L in range(5)])

v = toy.ToyVector.basis(words.word(1, 0))
for eps in "+-ox":
    out = toy.apply_elementary(eps, 1, v)
    print(eps, "on X_1 X_0 at site 1 ->", {w: complex(a) for w, a in out.items()})

# a- a+ is the vacuum projection of the factor, a+ a- its complement
plus, minus = toy.elementary("+", 0), toy.elementary("-", 0)
print("a-a+ Omega =", {w: complex(a) for w, a in (minus * plus).apply(toy.ToyVector.vacuum()).items()})

# centered single-site operators on alternating sites have zero vacuum expectation
rng = random.Random(1)
worst = max(abs(toy.alternating_moment(random_alternating(rng, 3, 6))) for _ in range(200))
print("max |tau| over 200 alternating products:", worst)

# uncentered, the expectation factorizes instead of vanishing
x = toy.site_op([[1.0, 2.0], [2.0, 1.0]], 0)
y = toy.site_op([[1.0, 2.0], [2.0, 1.0]], 1)
print("tau(x y) =", toy.vacuum_state(x * y).real, " tau(x) tau(y) =", (toy.vacuum_state(x) * toy.vacuum_state(y)).real)
