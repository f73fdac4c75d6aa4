# Angles of Frobenius, positivity density of powers, and exact discriminants.

from isogeny_census.cm_analytics import (discriminant_report, multiplicative_independence_heuristic,
                                         positivity_density, weil_root_profile)
from isogeny_census.honda_tate import WeilPolynomialRecord

surface = WeilPolynomialRecord.from_coeffs((1, -1, 2, -5, 25), 5)
curve = WeilPolynomialRecord.from_coeffs((1, -1, 5), 5)
quarter_turn = WeilPolynomialRecord.from_coeffs((1, 0, 5), 5)

# %% angles and a search for integer relations among them
for rec in (curve, surface, quarter_turn):
    prof = weil_root_profile(rec)
    v = multiplicative_independence_heuristic(prof, 20)
    print(f"{str(rec):28s} angles {[round(float(t), 6) for t in prof.angles]}  {v.label} {v.witness or ''}")

# %% density of n with every CM-type sign positive; 2^-g when the angles are independent
for rec in (curve, surface, quarter_turn):
    d = positivity_density(weil_root_profile(rec), 100_000)
    print(f"g = {d.g}: density {d.density:.4f} (2^-g = {d.target})  degenerate={d.degenerate}")

# %% discriminants of Z[alpha^n] and Z[alpha^n + q^n/alpha^n]
prof = weil_root_profile(surface, 40)
print("\n n   disc R'            disc R+      polar rel. err   unit-circle factor")
for n in range(1, 7):
    r = discriminant_report(surface, n, prof)
    print(f"{n:2d}  {r.disc_Rprime:18d} {r.disc_Rplus:12d}   {r.relerr_Rprime:.1e}          {r.unit_circle_factor:8.3f}")
