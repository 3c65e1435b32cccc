"""Gram matrices and null vectors in the Fock space.

Low levels are entirely null.  What survives at each level is counted by
partitions with all parts above n.
"""
from derivcft.characters import partitions_min_part
from derivcft.fock import effective_multiplicity, format_state, gram_matrix, null_report

g = gram_matrix(1, 2)
print("basis:", [format_state(s) for s in g.basis])
for row in g.entries:
    print("  ", [str(x) for x in row])
print("rank", g.rank())

r = null_report(2, 3)
print("n=2, N=3: rank", r.rank, "null vectors", len(r.null_basis))

for n in range(4):
    ranks = [effective_multiplicity(n, N) for N in range(11)]
    print(f"n={n} ranks", ranks, "==", partitions_min_part(10, n + 1))
