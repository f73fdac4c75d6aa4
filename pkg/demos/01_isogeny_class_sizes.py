# Isogeny class sizes from class numbers, checked against a brute-force census.
# Run: python demos/01_isogeny_class_sizes.py

import math

from isogeny_census.class_groups import class_number_forms, class_number_order
from isogeny_census.ec_isogeny import (conductor, enumerate_curves_by_trace,
                                       isogeny_class_size, isogeny_class_summary,
                                       ordinary_traces)

# %% two routes to a class number
# reduced forms count directly; the conductor formula starts from h(D_K)
for D_K, f in [(-23, 1), (-23, 2), (-4, 4), (-3, 6), (-71, 3)]:
    print(f"h({f}^2 * {D_K}) = {class_number_order(D_K, f)}  (forms: {class_number_forms(f * f * D_K)})")

# %% the Frobenius order of a curve with trace a over F_q
q = 13
for a in ordinary_traces(q)[:5]:
    f, D_K = conductor(a, q)
    print(f"a = {a:3d}: a^2 - 4q = {a * a - 4 * q:4d} = {f}^2 * {D_K}")

# %% class sizes against the census of all curves over F_13
census = enumerate_curves_by_trace(q)
print("trace  size  census")
for a in ordinary_traces(q):
    print(f"{a:5d} {isogeny_class_size(a, q):5d} {census[a]:7d}")

# %% growth over F_{q^n}: log N / log q^n hovers near 1/2
for n in range(1, 11):
    s = isogeny_class_summary(2, 5, n)
    print(f"n = {n:2d}  a_n = {s.a_n:8d}  f_n = {s.f_n:6d}  size = {s.size:7d}  "
          f"e_n = {math.log(s.size) / (n * math.log(5)):.3f}")
