"""Two structural comparisons between graphs at different levels.

First: every level-H graph is the quotient of the full-level graph by the
right H-action, vertex for vertex and edge for edge.  Second: the graph
for the Borel subgroup at level N^2 is isomorphic to the graph for the
split Cartan at level N, via quotienting each curve by part of its
distinguished cyclic subgroup.
"""

from isograph import (
    borel_cartan_iso,
    build_graph,
    graphs_equal,
    named_family,
    quotient_graph,
)

p, ell, N = 23, 2, 3
full = build_graph(p, ell, named_family("full", N))
print(f"full-level graph at N = {N}: {full.n_vertices} vertices")
for fam in ("borel", "torsion_point", "trivial"):
    H = named_family(fam, N)
    q = quotient_graph(full, H)
    direct = build_graph(p, ell, H)
    print(f"  quotient by {fam}(3): {q.n_vertices} vertices; "
          f"equals the direct build: {graphs_equal(q, direct)}")

print()
rep = borel_cartan_iso(23, 3, 2)
print(f"Borel(4) vs split Cartan(2) at (p, ell) = (23, 3): "
      f"{rep.borel.n_vertices} vertices each, adjacency match: {rep.adjacency_match}")
