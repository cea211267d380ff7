"""Graph problems on top of the sparse product."""

from sparsemm.apps import (ae_triangle_brute, ae_triangle_via_mm, closure_floyd_warshall,
                           count_triangles_brute, count_triangles_via_mm, transitive_closure)
from sparsemm.graphs import psaet_tripartite, random_digraph

G = psaet_tripartite(60, seed=1)
print(f"unbalanced tripartite graph: |X|={G.nx} |Y|={G.ny} |Z|={G.nz}, "
      f"edges XY={len(G.exy)} YZ={len(G.eyz)} XZ={len(G.exz)}")
hit = ae_triangle_via_mm(G)
print(f"{len(hit)} of {len(G.exz)} X-Z edges lie in a triangle; brute force agrees:",
      hit == ae_triangle_brute(G))
counts = count_triangles_via_mm(G)
print("max triangles through one edge:", max(counts.values()),
      "| counts agree:", counts == count_triangles_brute(G))

D = random_digraph(80, 0.02, seed=2)
rounds = []
T = transitive_closure(D, report_rounds=rounds)
print(f"digraph n=80 with {len(D.arcs)} arcs -> closure {len(T.arcs)} arcs "
      f"after {rounds[0]} squarings; Floyd-Warshall agrees:",
      T.arc_set() == closure_floyd_warshall(D).arc_set())
