#!/usr/bin/env python
# One zeta function, three computations.
#
#   brute force     count periodic patterns u (u^inf in the shift) word by word
#   determinant     alternating product of det(I - H_l) over exterior powers
#   substitution    zeta of the finite pattern graph, pattern letters replaced by series

import time

from soficdyck import builtin, counts_from_zeta, zeta_bruteforce, zeta_det_route, zeta_subst_route

N = 8

for name in ("golden-mean", "dyck-1", "dyck-2", "motzkin-2-1", "fig2"):
    a = builtin(name)
    t = time.time()
    zb = zeta_bruteforce(a, N)
    t_brute = time.time() - t
    t = time.time()
    zd = zeta_det_route(a, cap=N)
    zs = zeta_subst_route(a, cap=N)
    t_formula = time.time() - t
    print(name)
    print("  zeta =", zd)
    print("  routes agree:", zb == zd == zs, " (brute %.2fs, formulas %.2fs)" % (t_brute, t_formula))
    print("  p_n  =", list(counts_from_zeta(zd).values()))

# the formula routes are cheap, so they go much further than brute force
zd = zeta_det_route(builtin("fig2"), cap=24)
print("fig2 p_24 =", counts_from_zeta(zd)[24])

# multivariate: letters stay as commuting variables
print(zeta_det_route(builtin("fig2"), cap=3, variables="multi"))
