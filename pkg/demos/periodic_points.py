#!/usr/bin/env python
# Periodic patterns, orbit counts and growth.

from soficdyck import builtin, counts_from_zeta, entropy_estimate, is_periodic_pattern, zeta_det_route
from soficdyck.words import word
from soficdyck.zeta import periodic_patterns

a = builtin("fig1-sofic")
# i moves between the two states, so inside a bracket pair it must come in pairs
for text in (")", "( [ i ] [ ] )", "( [ i i ] [ ] )"):
    u = word(a.alphabet, text)
    print("%-18s periodic: %s" % (text, is_periodic_pattern(a, u)))

print("period-2 patterns of fig2:", [" ".join(u) for u in periodic_patterns(builtin("fig2"), 2)])

# Motzkin shift with two bracket pairs and one internal letter: entropy log 4
table = counts_from_zeta(zeta_det_route(builtin("motzkin-2-1"), cap=24))
print("orbits of least period 1..6:", [table.orbits()[n] for n in range(1, 7)])
for n, g in entropy_estimate(table)[::4]:
    print("n = %2d   p_n^(1/n) = %.4f" % (n, g))
