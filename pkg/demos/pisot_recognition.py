"""Recognising rounded powers of the Tribonacci constant inside Q(beta)."""
import numpy as np

from bracketwords import pisot as P

U = P.make_pisot_unit(1, 1)
print(U, "discriminant", U.disc)
print("rounded powers ", P.rounded_powers(U, 12))
print("traces         ", P.trace_sequence(U, 12))

# above the exception bound the three algebraic conditions decide alone
for n in (9326, 9327, 17155, 17156):
    d = P.solve_ghh(U, n)
    print(f"n={n:3d}  g(n) = {d.g.format('beta')}  norm {d.norm}  member {P.membership_test(U, n)}")

mask = P.membership_mask(U, np.arange(10 ** 6))
print("members below 1e6:", np.flatnonzero(mask).tolist())

V = P.make_pisot_unit(2, -1)
print("x^3-2x^2+x-1: beta is the", V.unit_index, "power of the root of", V.root)
