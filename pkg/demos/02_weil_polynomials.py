# Weil q-polynomials of degree 2 and 4: census, Newton polygons, growth with q.

from collections import Counter

from isogeny_census.honda_tate import census_scaling, enumerate_weil_polynomials

# %% degree 2 over F_5: x^2 - a x + 5 with |a| <= 4
for r in enumerate_weil_polynomials(1, 5):
    print(f"{str(r):18s} slopes {[str(s) for s in r.newton_slopes]}  ordinary={r.ordinary}")

# %% degree 4 over F_5, grouped by Newton polygon
recs = enumerate_weil_polynomials(2, 5)
shapes = Counter(tuple(str(s) for s in r.newton_slopes) for r in recs)
print(f"\n{len(recs)} Weil 5-polynomials of degree 4")
for shape, n in sorted(shapes.items()):
    print(f"  slopes {shape}: {n}")

# %% the ordinary count grows like q^(g(g+1)/4)
for g, qs in [(1, [25, 121, 625]), (2, [5, 7, 11, 13])]:
    res = census_scaling(g, qs)
    print(f"g = {g}: points {res.points}, fitted exponent {res.slope:.3f}, expected {res.target}")
