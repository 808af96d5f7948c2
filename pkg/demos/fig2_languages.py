#!/usr/bin/env python
# Prime Dyck words and Dyck words of the two-state example automaton.

from soficdyck import builtin, dyck_and_prime_matrices, h_matrix, HKind, TruncatedSeries

a = builtin("fig2")
print(a)
print("calls", a.alphabet.call, "returns", a.alphabet.ret, "internal", a.alphabet.internal)

# D[p,q] counts Dyck words labeling admissible paths p -> q, C[p,q] the prime ones
D, C = dyck_and_prime_matrices(a, 12)
print("D11 =", D["1", "1"])
print("C11 =", C["1", "1"])
print("C12 =", C["1", "2"], "  C22 =", C["2", "2"])

# D11 is algebraic: 2 z^2 D^2 - (1 - z^2) D + 1 = 0
z = TruncatedSeries.z(12)
D11 = D["1", "1"]
print("2z^2 D11^2 - (1-z^2) D11 + 1 =", 2 * z * z * D11 * D11 - (1 - z * z) * D11 + 1)
print("C11 - 2z^2 D11 =", C["1", "1"] - 2 * z * z * D11)

# keeping letters as commuting variables
D, C = dyck_and_prime_matrices(a, 6, "multi")
print("C11 (letters) =", C["1", "1"])
print("C12 (letters) =", C["1", "2"])

# the matrix C*Mc: a Dyck word then one call letter; its second column is zero
H = h_matrix(a, HKind.CStarMc, 7)
for p in a.states:
    print("  ".join("C*Mc[%s,%s] = %s" % (p, q, H[p, q]) for q in a.states))
