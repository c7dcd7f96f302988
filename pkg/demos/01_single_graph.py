"""Build one isogeny graph and look around.

The vertices are supersingular elliptic curves over GF(p^2) decorated
with a level structure; every vertex has exactly ell+1 outgoing edges,
one per order-ell subgroup of the ell-torsion.
"""

from fractions import Fraction

from isograph import build_graph, named_family
from isograph.spectral import eigenvalues

p, ell = 23, 3
G = build_graph(p, ell, named_family("trivial", 1))

print(f"G(p={p}, ell={ell}, trivial level)")
print(f"  vertices: {G.n_vertices}")
for v in G.vertices:
    print(f"    j = {hex(v.j_label)}  |Aut| = {v.aut}")
print("  adjacency (A[i][j] = edges j -> i):")
for row in G.A:
    print("   ", row.tolist())

# the column sums realize the ell+1-regularity, and the weighted vertex
# count is (p-1)/24 exactly
print("  column sums:", G.A.sum(axis=0).tolist())
print("  sum of 1/|Aut|:", G.mass(), "=", Fraction(p - 1, 24))

S = eigenvalues(G.A)
print("  eigenvalues:", [round(v.real, 6) + 0j if abs(v.imag) < 1e-12 else v for v in S.values])
print("  method:", S.method, " characteristic polynomial:", S.charpoly)
