"""A walk through the Fibonacci word and its relatives.

Run with ``python3 demos/sturmian_tour.py``.
"""
from bracketwords import analysis as A
from bracketwords import gpexpr as gp
from bracketwords import words as W

g = W.golden_conjugate()
fib = W.sturmian(g)
print("Fibonacci word       ", fib.string(56))

# the same word, read off the rotation by g on the circle
rot = W.interval_indicator(gp.frac(gp.const(g, "g") * gp.N), W.IntervalSet([(0, g, True, False)]))
print("rotation coding      ", rot.string(56))

prof = A.subword_complexity(fib, range(1, 11), 10 ** 4)
print("p(N), N = 1..10      ", [prof[N] for N in range(1, 11)])
print("Morse-Hedlund        ", A.periodicity_check(prof))

ok, _ = A.count_deviation_bounded(fib, 1, g, 1, 10 ** 5)
print("|cnt - gN| <= 1 up to 1e5:", ok, "  balance:", A.balance_constant(fib, 1, 40, 10 ** 4))

poly = W.builtin("poly_example")
print("{phi n^2} in [0,1/4) u (3/4,1):", poly.string(55))

# two independent rotations give (N+1)^2 factors
pair = W.builtin("sturmian_product")
pp = A.subword_complexity(pair, range(1, 6), 10 ** 5)
print("product p(N)         ", [pp[N] for N in range(1, 6)])
