#!/usr/bin/env python
# Membership patterns: group the words of C*Mc (resp. Mr + C) by the set of
# state pairs (p, q) they connect.  Each pattern becomes one letter of a
# finite graph; its zeta function, with letters replaced by the pattern
# series, gives back one factor of the zeta function.

from soficdyck import builtin, pattern_graph, sofic_zeta, substitute, HKind, TruncatedSeries, zeta_det_route
from soficdyck.zeta import pattern_exterior_power

N = 10
a = builtin("fig2")

g = pattern_graph(a, HKind.CStarMc, N, orientation="forward")
print("left letters:", g.letters)
print("left edges:", g.edges)
for name, s in g.series.items():
    print("  %s counts %s" % (name, s))
zg = sofic_zeta(g, N)
print("Z(S_H)  =", zg.truncate(4))

h = pattern_graph(a, HKind.MrPlusC, N, orientation="reverse")
print("right letters:", h.letters)
zh = sofic_zeta(h, N, "reverse")
print("Z(S_H') =", zh.truncate(4))

# signed subset matrix over the pattern letters, before substitution
print(pattern_exterior_power(h, 2, N, "reverse")[("1", "2"), ("1", "2")])

one = TruncatedSeries.one(N)
left = substitute(zg, g.series, like=one)
right = substitute(zh, h.series, like=one)
print("product of substituted factors:", left * right)
print("equals determinant route:", left * right == zeta_det_route(a, cap=N))
