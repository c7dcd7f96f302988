"""The showcase instance: p=23, ell=3, level 8 with an index-8 subgroup.

The Weil invariant maps the graph onto a little Cayley graph (orbits of
multiplication by ell on the primitive residues modulo N up to det H).
Here that shadow has two 2-cycles, so the isogeny graph splits into two
bipartite components, and graph symmetries carry one onto the other.
"""

from isograph import build_graph, component_split, graph_operator, subgroup_from_generators
from isograph.spectral import eigenvalues, gap_report

GENS = [(5, 6, 2, 1), (1, 2, 0, 1), (7, 0, 2, 7), (5, 0, 0, 5),
        (2, 7, 7, 1), (1, 4, 0, 1), (1, 0, 4, 1)]

H = subgroup_from_generators(8, GENS, name="index8")
print(f"H < GL2(Z/8): order {H.order}, index {H.index}, det H = {sorted(H.det_set())}")

G = build_graph(23, 3, H)
print(f"graph: {G.n_vertices} vertices, all out-degree {G.ell + 1}")

rep = component_split(G)
print(f"Cayley shadow: {rep.cayley.n} cycles of length {rep.cayley.k}: {rep.cayley.cycles}")
for i, comp in enumerate(rep.components):
    parts = rep.partitions[i]
    print(f"  component {i}: {len(comp)} vertices, bipartition sizes "
          f"{[len(v) for v in parts.values()]}, strongly connected: "
          f"{rep.strongly_connected[i]}")

print("components isomorphic via graph symmetries:", rep.isomorphic_ok)

gr = gap_report(G, rep)
print(f"trivial eigenvalues per component: {[[round(t.real) for t in c.trivial] for c in gr.components]}")
print(f"spectral gap eta = {gr.eta:.6f}, Ramanujan: {gr.ramanujan}")

# the Frobenius symmetry squares to the diamond <p>
fr = graph_operator(G, "frobenius")
dp = graph_operator(G, "diamond", 23)
print("sigma^2 == <p>:", bool((fr.perm[fr.perm] == dp.perm).all()))
