"""Core graph types plus neighborhood and ball primitives.

The central type is an immutable :class:`Graph` that doubles as a subgraph
view: every view shares one host edge table, so edge ids are dense on the
host and stable across views.  All operations here are pure functions; the
objects are safe to share between threads.
"""

from __future__ import annotations

import hashlib
import json
from array import array
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence


class ParseError(ValueError):
    """Raised for malformed edge-list text; carries a 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class Graph:
    """Undirected simple graph, possibly a masked view of a host graph.

    Vertices are ints in ``range(host_n)``; a view keeps only a subset of
    them live.  Edge ids index the shared host edge table, so a view and
    its host agree on what edge ``e`` means.
    """

    __slots__ = ("host_n", "edge_table", "vertices", "edge_ids", "_adj", "_eid_of", "_fp")

    def __init__(
        self,
        host_n: int,
        edge_table: tuple[tuple[int, int], ...],
        vertices: frozenset[int],
        edge_ids: frozenset[int],
    ):
        self.host_n = host_n
        self.edge_table = edge_table
        self.vertices = vertices
        self.edge_ids = edge_ids
        self._adj: Optional[dict[int, list[tuple[int, int]]]] = None
        self._eid_of: Optional[dict[tuple[int, int], int]] = None
        self._fp: Optional[str] = None

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        """Build a host graph on vertex set ``range(n)`` from endpoint pairs.

        Pairs may come in either endpoint order.  Loops and duplicate pairs
        are rejected: the type models simple graphs only.
        """
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        table: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in pairs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"endpoint out of range: ({u}, {v}) with n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u} not allowed")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            table.append(key)
        return cls(n, tuple(table), frozenset(range(n)), frozenset(range(len(table))))

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        """Number of live vertices."""
        return len(self.vertices)

    @property
    def m(self) -> int:
        """Number of live edges."""
        return len(self.edge_ids)

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self.edge_table[eid]

    def vertex_list(self) -> list[int]:
        return sorted(self.vertices)

    def edge_id_list(self) -> list[int]:
        return sorted(self.edge_ids)

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """Live adjacency: vertex -> sorted list of (neighbor, edge id)."""
        if self._adj is None:
            adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
            tab = self.edge_table
            for eid in self.edge_ids:
                u, v = tab[eid]
                adj[u].append((v, eid))
                adj[v].append((u, eid))
            for lst in adj.values():
                lst.sort()
            self._adj = adj
        return self._adj

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        return self.adjacency()[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])

    def degrees(self) -> dict[int, int]:
        return {v: len(lst) for v, lst in self.adjacency().items()}

    def avg_degree(self) -> float:
        return 2.0 * self.m / self.n if self.n else 0.0

    def edge_id(self, u: int, v: int) -> int:
        """Live edge id joining u and v; KeyError if absent."""
        if self._eid_of is None:
            self._eid_of = {self.edge_table[eid]: eid for eid in self.edge_ids}
        key = (u, v) if u < v else (v, u)
        return self._eid_of[key]

    def has_edge(self, u: int, v: int) -> bool:
        try:
            self.edge_id(u, v)
            return True
        except KeyError:
            return False

    # -- views -----------------------------------------------------------

    def subview(
        self,
        vertices: Optional[Iterable[int]] = None,
        edge_ids: Optional[Iterable[int]] = None,
    ) -> "Graph":
        """Restricted view sharing this graph's host edge table.

        Restricting vertices drops edges with a dead endpoint; restricting
        edges never drops vertices.  Edge ids keep their host meaning.
        """
        verts = self.vertices if vertices is None else frozenset(vertices)
        if not verts <= self.vertices:
            raise ValueError("subview vertices must be live in the parent")
        eids = self.edge_ids if edge_ids is None else frozenset(edge_ids)
        if not eids <= self.edge_ids:
            raise ValueError("subview edges must be live in the parent")
        tab = self.edge_table
        keep = frozenset(
            e for e in eids if tab[e][0] in verts and tab[e][1] in verts
        )
        return Graph(self.host_n, tab, verts, keep)

    def without_edges(self, drop: Iterable[int]) -> "Graph":
        return Graph(self.host_n, self.edge_table, self.vertices, self.edge_ids - frozenset(drop))

    def induced(self, vertices: Iterable[int]) -> "Graph":
        return self.subview(vertices=vertices)

    def components(self) -> list[list[int]]:
        """Connected components of live vertices, each sorted, in sorted order."""
        adj = self.adjacency()
        seen: set[int] = set()
        comps: list[list[int]] = []
        for root in self.vertex_list():
            if root in seen:
                continue
            comp = [root]
            seen.add(root)
            stack = [root]
            while stack:
                a = stack.pop()
                for b, _ in adj[a]:
                    if b not in seen:
                        seen.add(b)
                        comp.append(b)
                        stack.append(b)
            comp.sort()
            comps.append(comp)
        return comps

    def fingerprint(self) -> str:
        """Stable hex digest of (host size, live vertices, live edges)."""
        if self._fp is None:
            h = hashlib.sha256()
            h.update(str(self.host_n).encode())
            h.update(array("q", self.vertex_list()).tobytes())
            flat = array("q")
            tab = self.edge_table
            for eid in self.edge_id_list():
                u, v = tab[eid]
                flat.append(u)
                flat.append(v)
            h.update(flat.tobytes())
            self._fp = h.hexdigest()[:16]
        return self._fp

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- paths, cycles, decompositions ------------------------------------------


@dataclass(frozen=True)
class Path:
    """Simple path: k+1 distinct vertices joined by k edge ids in order."""

    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.edge_ids) + 1:
            raise ValueError("path needs exactly one more vertex than edge")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("path repeats a vertex")

    @property
    def length(self) -> int:
        return len(self.edge_ids)

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    def check(self, g: Graph) -> None:
        """Raise unless every edge is live in g and joins its two vertices."""
        for i, eid in enumerate(self.edge_ids):
            if eid not in g.edge_ids:
                raise ValueError(f"path edge {eid} not live")
            a, b = self.vertices[i], self.vertices[i + 1]
            if tuple(sorted((a, b))) != g.endpoints(eid):
                raise ValueError(f"path edge {eid} does not join {a},{b}")


@dataclass(frozen=True)
class Cycle:
    """Simple cycle: L >= 3 distinct vertices; edge_ids[i] joins v[i], v[i+1 mod L]."""

    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("cycle needs at least 3 vertices")
        if len(self.vertices) != len(self.edge_ids):
            raise ValueError("cycle needs one edge per vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("cycle repeats a vertex")

    @property
    def length(self) -> int:
        return len(self.edge_ids)

    def check(self, g: Graph) -> None:
        L = len(self.vertices)
        for i, eid in enumerate(self.edge_ids):
            if eid not in g.edge_ids:
                raise ValueError(f"cycle edge {eid} not live")
            a, b = self.vertices[i], self.vertices[(i + 1) % L]
            if tuple(sorted((a, b))) != g.endpoints(eid):
                raise ValueError(f"cycle edge {eid} does not join {a},{b}")


@dataclass(frozen=True)
class Decomposition:
    """Exact partition of a graph's edges into cycles plus single edges."""

    source: str
    n: int
    m: int
    cycles: tuple[Cycle, ...]
    single_edges: tuple[int, ...]
    stats: dict = field(default_factory=dict)

    @classmethod
    def from_parts(
        cls,
        g: Graph,
        cycles: Sequence[Cycle],
        single_edges: Iterable[int],
        stats: Optional[dict] = None,
    ) -> "Decomposition":
        base = {
            "n_cycles": len(cycles),
            "n_single_edges": 0,
            "pieces": 0,
        }
        singles = tuple(sorted(single_edges))
        base["n_single_edges"] = len(singles)
        base["pieces"] = len(cycles) + len(singles)
        if stats:
            base.update(stats)
        return cls(
            source=g.fingerprint(),
            n=g.host_n,
            m=g.m,
            cycles=tuple(cycles),
            single_edges=singles,
            stats=base,
        )

    @property
    def pieces(self) -> int:
        return len(self.cycles) + len(self.single_edges)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...]
    n_cycles: int
    n_single_edges: int
    covered_edges: int

    def raise_if_bad(self) -> None:
        if not self.ok:
            raise AssertionError("invalid decomposition: " + "; ".join(self.problems[:5]))


def validate_decomposition(g: Graph, d: Decomposition) -> ValidationReport:
    """Check that d is an exact, well-formed edge partition of g.

    Verifies the source fingerprint, every cycle's simplicity and incidence,
    liveness of single edges, and that each live edge of g is covered exactly
    once.  Collects up to 20 problems instead of stopping at the first.
    """
    problems: list[str] = []

    def note(msg: str) -> None:
        if len(problems) < 20:
            problems.append(msg)

    if d.source != g.fingerprint():
        note(f"fingerprint mismatch: {d.source} vs {g.fingerprint()}")
    if d.n != g.host_n:
        note(f"vertex count mismatch: {d.n} vs {g.host_n}")
    if d.m != g.m:
        note(f"edge count mismatch: {d.m} vs {g.m}")

    used: set[int] = set()
    covered = 0
    for ci, cyc in enumerate(d.cycles):
        try:
            cyc.check(g)
        except ValueError as exc:
            note(f"cycle {ci}: {exc}")
            continue
        for eid in cyc.edge_ids:
            if eid in used:
                note(f"cycle {ci}: edge {eid} already covered")
            else:
                used.add(eid)
                covered += 1
    for eid in d.single_edges:
        if eid not in g.edge_ids:
            note(f"single edge {eid} not live")
        elif eid in used:
            note(f"single edge {eid} already covered")
        else:
            used.add(eid)
            covered += 1
    missing = g.edge_ids - used
    if missing:
        note(f"{len(missing)} live edges uncovered, e.g. {sorted(missing)[:5]}")

    return ValidationReport(
        ok=not problems,
        problems=tuple(problems),
        n_cycles=len(d.cycles),
        n_single_edges=len(d.single_edges),
        covered_edges=covered,
    )


# -- neighborhood / ball primitives ------------------------------------------


def _check_sets(g: Graph, U: Iterable[int], F: Iterable[int]) -> tuple[set[int], set[int]]:
    Uset = set(U)
    if not Uset:
        raise ValueError("U must be nonempty")
    if not Uset <= g.vertices:
        raise ValueError("U must consist of live vertices")
    Fset = set(F)
    if not Fset <= g.edge_ids:
        raise ValueError("F must consist of live edge ids")
    return Uset, Fset


def neighborhood(g: Graph, U: Iterable[int], F: Iterable[int] = ()) -> set[int]:
    """External neighborhood of U in g minus the edge set F."""
    Uset, Fset = _check_sets(g, U, F)
    adj = g.adjacency()
    out: set[int] = set()
    for u in Uset:
        for w, eid in adj[u]:
            if w not in Uset and eid not in Fset:
                out.add(w)
    return out


def robust_neighborhood(g: Graph, U: Iterable[int], F: Iterable[int], d: int) -> set[int]:
    """Vertices outside U with at least d edges into U, in g minus F."""
    if d < 1:
        raise ValueError("d must be a positive count")
    Uset, Fset = _check_sets(g, U, F)
    adj = g.adjacency()
    count: dict[int, int] = {}
    for u in Uset:
        for w, eid in adj[u]:
            if w not in Uset and eid not in Fset:
                count[w] = count.get(w, 0) + 1
    return {w for w, c in count.items() if c >= d}


def ball(
    g: Graph,
    U: Iterable[int],
    V: Iterable[int],
    i: int,
    F: Iterable[int] = (),
) -> set[int]:
    """Vertices of V reachable from U by a path of length <= i through V.

    Internal path vertices must lie in V; the start vertex need not.  The
    result is a subset of V, and a start vertex in U cap V is reachable by
    the empty path.  BFS layering, O(n + m).
    """
    if i < 0:
        raise ValueError("radius must be nonnegative")
    Uset, Fset = _check_sets(g, U, F)
    Vset = set(V)
    if not Vset <= g.vertices:
        raise ValueError("V must consist of live vertices")
    adj = g.adjacency()
    reached = Uset & Vset
    seen = set(Uset)
    frontier = list(Uset)
    dist = 0
    while frontier and dist < i:
        dist += 1
        nxt: list[int] = []
        for a in frontier:
            for b, eid in adj[a]:
                if eid in Fset or b in seen or b not in Vset:
                    continue
                seen.add(b)
                reached.add(b)
                nxt.append(b)
        frontier = nxt
    return reached


# -- edge-list text format ----------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse the plain edge-list format: header ``n m``, then ``u v`` lines.

    Requires 0 <= u < v < n on each edge line.  Blank lines and lines whose
    first nonblank character is ``#`` are ignored.  Raises :class:`ParseError`
    with a 1-based line number on any malformed content.
    """
    n = -1
    m = -1
    pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    header_done = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"expected two integers, got {raw!r}", line_no)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"expected two integers, got {raw!r}", line_no) from None
        if not header_done:
            if a < 0 or b < 0:
                raise ParseError("header counts must be nonnegative", line_no)
            n, m = a, b
            header_done = True
            continue
        if len(pairs) == m:
            raise ParseError(f"more than {m} edge lines", line_no)
        if not (0 <= a < b < n):
            raise ParseError(f"edge must satisfy 0 <= u < v < n, got {a} {b}", line_no)
        if (a, b) in seen:
            raise ParseError(f"duplicate edge {a} {b}", line_no)
        seen.add((a, b))
        pairs.append((a, b))
    if not header_done:
        raise ParseError("missing header line", 1)
    if len(pairs) != m:
        raise ParseError(f"header promised {m} edges, found {len(pairs)}", 1)
    return Graph.from_edges(n, pairs)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.host_n} {g.m}"]
    tab = g.edge_table
    for eid in g.edge_id_list():
        u, v = tab[eid]
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


# -- decomposition JSON -------------------------------------------------------

DECOMPOSITION_SCHEMA_VERSION = 1


def decomposition_to_json_dict(d: Decomposition, g: Graph) -> dict:
    """Schema-stable dict form; see docs/decomposition.schema.json."""
    tab = g.edge_table
    return {
        "schema": DECOMPOSITION_SCHEMA_VERSION,
        "n": d.n,
        "m": d.m,
        "source": d.source,
        "cycles": [list(c.vertices) for c in d.cycles],
        "edges": [list(tab[eid]) for eid in d.single_edges],
        "stats": dict(sorted(d.stats.items())),
    }


def decomposition_to_json(d: Decomposition, g: Graph) -> str:
    return json.dumps(decomposition_to_json_dict(d, g), sort_keys=True, separators=(",", ":"))


def decomposition_from_json_dict(doc: dict, g: Graph) -> Decomposition:
    """Rebind a JSON document to graph g, resolving vertex pairs to edge ids."""
    cycles = []
    for verts in doc["cycles"]:
        vs = tuple(verts)
        eids = tuple(g.edge_id(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))
        cycles.append(Cycle(vs, eids))
    singles = tuple(g.edge_id(u, v) for u, v in doc["edges"])
    return Decomposition(
        source=doc.get("source", g.fingerprint()),
        n=doc["n"],
        m=doc["m"],
        cycles=tuple(cycles),
        single_edges=singles,
        stats=dict(doc.get("stats", {})),
    )


def validate_decomposition_json(doc: dict, g: Optional[Graph] = None) -> ValidationReport:
    """Validate a decomposition document, standalone or against a graph.

    Standalone mode reconstructs the implied graph from the document itself:
    cycles expand to their consecutive edges, plus the listed single edges;
    paths (optional field) expand likewise.  The implied edge multiset must
    be simple, have m members, and use vertex ids below n.
    """
    problems: list[str] = []

    def note(msg: str) -> None:
        if len(problems) < 20:
            problems.append(msg)

    n = doc.get("n")
    m = doc.get("m")
    if not isinstance(n, int) or n < 0:
        note("bad or missing n")
        n = 0
    if not isinstance(m, int) or m < 0:
        note("bad or missing m")
        m = 0

    edge_multiset: list[tuple[int, int]] = []

    def add_edge(a: int, b: int, what: str) -> None:
        if a == b:
            note(f"{what}: loop at {a}")
            return
        if not (0 <= a < n and 0 <= b < n):
            note(f"{what}: endpoint out of range ({a}, {b})")
            return
        edge_multiset.append((a, b) if a < b else (b, a))

    n_cycles = 0
    for ci, verts in enumerate(doc.get("cycles", [])):
        n_cycles += 1
        if len(verts) < 3:
            note(f"cycle {ci}: fewer than 3 vertices")
            continue
        if len(set(verts)) != len(verts):
            note(f"cycle {ci}: repeated vertex")
            continue
        for i in range(len(verts)):
            add_edge(verts[i], verts[(i + 1) % len(verts)], f"cycle {ci}")
    for pi, verts in enumerate(doc.get("paths", [])):
        if len(verts) < 2:
            note(f"path {pi}: fewer than 2 vertices")
            continue
        if len(set(verts)) != len(verts):
            note(f"path {pi}: repeated vertex")
            continue
        for i in range(len(verts) - 1):
            add_edge(verts[i], verts[i + 1], f"path {pi}")
    n_singles = 0
    for u, v in doc.get("edges", []):
        n_singles += 1
        add_edge(u, v, "single edge")

    if len(set(edge_multiset)) != len(edge_multiset):
        dupes = sorted({e for e in edge_multiset if edge_multiset.count(e) > 1})
        note(f"edges covered more than once, e.g. {dupes[:5]}")
    if len(edge_multiset) != m:
        note(f"document covers {len(edge_multiset)} edges but claims m={m}")

    if g is not None:
        actual = {g.edge_table[eid] for eid in g.edge_ids}
        implied = set(edge_multiset)
        if g.host_n != n:
            note(f"graph has n={g.host_n}, document says {n}")
        if implied != actual:
            extra = sorted(implied - actual)[:5]
            miss = sorted(actual - implied)[:5]
            note(f"edge sets differ from graph (extra {extra}, missing {miss})")
        src = doc.get("source")
        if src is not None and src != g.fingerprint():
            note("source fingerprint does not match graph")

    return ValidationReport(
        ok=not problems,
        problems=tuple(problems),
        n_cycles=n_cycles,
        n_single_edges=n_singles,
        covered_edges=len(set(edge_multiset)),
    )


# -- DOT export ---------------------------------------------------------------

_DOT_PALETTE = (
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
    "#a65628", "#f781bf", "#17becf", "#bcbd22", "#666666",
)


def to_dot(g: Graph, d: Optional[Decomposition] = None, name: str = "G") -> str:
    """Graphviz text for g; with a decomposition, cycles are colored by index."""
    lines = [f"graph {name} {{"]
    color: dict[int, str] = {}
    if d is not None:
        for ci, cyc in enumerate(d.cycles):
            c = _DOT_PALETTE[ci % len(_DOT_PALETTE)]
            for eid in cyc.edge_ids:
                color[eid] = c
    for v in g.vertex_list():
        lines.append(f"  {v};")
    tab = g.edge_table
    for eid in g.edge_id_list():
        u, v = tab[eid]
        if d is None:
            lines.append(f"  {u} -- {v};")
        elif eid in color:
            lines.append(f'  {u} -- {v} [color="{color[eid]}"];')
        else:
            lines.append(f'  {u} -- {v} [color="#999999", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
