"""Graph sizes against cusp-form dimensions.

After removing the trivial eigenvectors (one per Cayley cycle), the space
the adjacency matrix acts on matches a space of weight-2 cusp forms whose
dimension is a classical genus computation.  No modular forms are ever
computed here: both sides are exact integers obtained independently.
"""

from isograph import build_graph, named_family
from isograph.modular import check_dimensions, genus_X0

print("trivial level: |V| - 1 = genus of X0(p)")
for p in (23, 47, 71, 97):
    G = build_graph(p, 2, named_family("trivial", 1))
    print(f"  p = {p}: |V| - 1 = {G.n_vertices - 1}, g(X0({p})) = {genus_X0(p)}")

print("\nBorel level N: |V| - 1 = dim of the p-new forms for Gamma_0(pN)")
for (p, N) in ((23, 5), (41, 3)):
    G = build_graph(p, 2, named_family("borel", N))
    r = check_dimensions(G)
    print(f"  (p, N) = ({p}, {N}): graph {r.graph_side}, modular {r.modular_side}, "
          f"match: {r.match}")

print("\nnonsplit Cartan N: |V| - 1 = sum over d|N of new forms for Gamma_0(p d^2)")
for (p, N) in ((23, 5), (31, 7)):
    G = build_graph(p, 2, named_family("nonsplit_cartan", N))
    r = check_dimensions(G)
    print(f"  (p, N) = ({p}, {N}): graph {r.graph_side}, modular {r.modular_side}, "
          f"match: {r.match}")
