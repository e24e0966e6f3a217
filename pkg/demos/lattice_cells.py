"""Small-relation lattices, half-space cuts, and prefix reconstruction."""
import math
from fractions import Fraction

from bracketwords import sclab as S
from bracketwords.exactreal import sqrt_field

K = sqrt_field(2, 3)
alpha = (1, K.sqrt(2) + Fraction(1, 10 ** 4), K.sqrt(3))
lat, R, cert = S.lattice_approx((1, 1 + Fraction(1, 10 ** 5)), Fraction(1, 10 ** 4), 4)
print("relations:", R.members, " lattice:", lat, " C_hat:", cert.C_hat)

fam, bound, ok = S.halfspace_cuts([(0, 0), (1, 0), (0, 1), (2, 3), (3, 1)])
print(f"5 points in the plane: {len(fam)} half-space cuts, bound {bound}")

h = [list(range(16)), [math.isqrt(3 * n * n) for n in range(16)]]
rep = S.prefix_count_experiment(h, 1, Fraction(1, 32))
print(f"distinct prefixes over a {rep.grid_points}-point grid: {rep.count}")

a = (Fraction(7, 13), Fraction(-5, 11))
vals, rec = S.reconstruct_prefix(h, a)
print("direct       ", S.g_alpha(h, a))
print("reconstructed", vals, " cases", rec.cases)
