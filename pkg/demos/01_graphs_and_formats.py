"""Graphs, views, and the interchange formats.

Walks through the core container: building a graph, slicing live views off
it, and moving decompositions through the text and JSON formats that every
other tool in the package speaks.
"""

from cycledecomp.graph import (
    Cycle,
    Decomposition,
    Graph,
    decomposition_from_json_dict,
    decomposition_to_json_dict,
    format_edge_list,
    parse_edge_list,
    to_dot,
    validate_decomposition,
)

# a triangle hanging off a path: 0-1-2-0 plus 2-3-4
g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
print("graph:", g)
print("degrees:", g.degrees())
print("components:", g.components())
print("fingerprint:", g.fingerprint())

print("\nedge-list text (the CLI's wire format):")
text = format_edge_list(g)
print(text)
assert format_edge_list(parse_edge_list(text)) == text  # round trip is exact

# views share the host's edge ids, so results on a view apply to the host
view = g.subview(edge_ids={g.edge_id(0, 1), g.edge_id(1, 2), g.edge_id(0, 2)})
print("triangle view:", view, "- same ids as host:", sorted(view.edge_ids))

# a decomposition is cycles plus leftover single edges, and it must account
# for every edge exactly once
tri = Cycle((0, 1, 2), (g.edge_id(0, 1), g.edge_id(1, 2), g.edge_id(0, 2)))
dec = Decomposition.from_parts(g, [tri], [g.edge_id(2, 3), g.edge_id(3, 4)])
report = validate_decomposition(g, dec)
print("\nhand-built decomposition: cycles=1 singles=2 ->", "valid" if report.ok else report.problems)

doc = decomposition_to_json_dict(dec, g)
print("JSON document keys:", sorted(doc))
back = decomposition_from_json_dict(doc, g)
assert back.pieces == dec.pieces
print("JSON round trip preserves all", back.pieces, "pieces")

# dropping an edge breaks the partition and the validator says where
broken = Decomposition.from_parts(g, [tri], [g.edge_id(2, 3)])
report = validate_decomposition(g, broken)
print("\ndropping one single edge ->", report.problems[0])

print("\nDOT export for graphviz (first lines):")
print("\n".join(to_dot(g, dec).splitlines()[:4]), "...")
