# The product-of-shifted-forms hypersurface R and a point of it inside a
# product of ordinary isogeny classes (as sets of j-invariants).

import json

import numpy as np

from isogeny_census.addcomb import (GroundSet, build_hypersurface, evaluate_R,
                                    hypersurface_search, ruzsa_sweep, sum_product_stats)
from isogeny_census.finite_field import make_field
from isogeny_census.harness import isogeny_class_sets, run_harness

# %% sum-product growth for a few random sets in F_101
F = make_field(101)
rng = np.random.default_rng(0)
for size in (5, 10, 20):
    A = GroundSet(F, rng.choice(101, size=size, replace=False))
    st = sum_product_stats(A)
    print(f"|A| = {size:2d}: |A+A| = {st.sumset:3d}, |AA| = {st.productset:3d}, "
          f"|(A+1)(A+1)| = {st.shifted_productset:3d}, best exponent {st.max_exponent:.2f}")

print("Ruzsa sweep, 2000 random pairs in Z/m:", ruzsa_sweep(2000, seed=1).ok)

# %% R for N = 1: four factors Q_c, one per c in {0, 1}^2
H = build_hypersurface(1)
print(json.dumps({k: H.describe()[k] for k in ("arity", "factors", "degree", "Q_c")}, indent=1))

# %% six isogeny classes over F_101 and a point on R = 0
classes = isogeny_class_sets(101, [1, 2, 3, 4, 5, 6])
res = hypersurface_search(classes, H)
print("class sizes", [len(c) for c in classes])
print("witness", [int(w) for w in res.witness], "shift", res.shift,
      "after", res.evaluations, "evaluations")
print("R(witness) =", evaluate_R(H, res.witness)[0])

# %% seeded trials over random primes
rep = run_harness(trials=10, seed=0)
print(f"hit rate {rep.hit_rate:.2f}, all witnesses verified: {rep.all_verified}")
