"""Path/cycle decompositions, long-cycle extraction, and the Eulerian finisher.

The well-spread decomposition pairs odd-degree vertices with virtual edges,
takes an Euler circuit per component, and splits the resulting walks into one
simple path each plus excised simple cycles.  Every vertex ends up an
endvertex of at most two paths, which is the only property downstream
consumers rely on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .graph import Cycle, Graph, Path


@dataclass(frozen=True)
class WellSpreadResult:
    paths: tuple[Path, ...]
    cycles: tuple[Cycle, ...]
    # paths_only mode: cycles kept because splitting them would push some
    # vertex past endpoint multiplicity 2
    infeasible: tuple[Cycle, ...] = field(default=())

    def endpoint_multiplicity(self) -> dict[int, int]:
        mult: dict[int, int] = {}
        for p in self.paths:
            for v in (p.vertices[0], p.vertices[-1]):
                mult[v] = mult.get(v, 0) + 1
        return mult


def _euler_circuit(
    start: int,
    adj: dict[int, list[tuple[int, int]]],
    used: list[bool],
    ptr: dict[int, int],
) -> tuple[list[int], list[int]]:
    """Hierholzer circuit over a connected even-degree multigraph.

    adj maps vertex -> [(edge_index, other)].  Returns the circuit as a
    vertex sequence v0..vk (v0 == vk) and edge-index sequence e1..ek where
    e_i joins v_{i-1} and v_i.
    """
    vstack = [start]
    estack: list[int] = []
    vout: list[int] = []
    eout: list[int] = []
    while vstack:
        v = vstack[-1]
        lst = adj[v]
        i = ptr[v]
        while i < len(lst) and used[lst[i][0]]:
            i += 1
        ptr[v] = i
        if i == len(lst):
            vout.append(v)
            vstack.pop()
            if estack:
                eout.append(estack.pop())
        else:
            ei, w = lst[i]
            used[ei] = True
            ptr[v] = i + 1
            vstack.append(w)
            estack.append(ei)
    vout.reverse()
    eout.reverse()
    return vout, eout


def _excise_walk(
    vs: list[int], es: list[int]
) -> tuple[Optional[Path], list[Cycle]]:
    """Split a walk into one simple path plus simple cycles.

    Left-to-right scan; each first-repeated vertex closes a cycle which is
    cut out in place.  The survivor keeps the walk's endpoints, so for a
    closed walk nothing but cycles remain.
    """
    cycles: list[Cycle] = []
    stack_v = [vs[0]]
    stack_e: list[int] = []
    pos = {vs[0]: 0}
    for v, e in zip(vs[1:], es):
        j = pos.get(v)
        if j is None:
            pos[v] = len(stack_v)
            stack_v.append(v)
            stack_e.append(e)
            continue
        cyc_vs = tuple(stack_v[j:])
        cyc_es = tuple(stack_e[j:]) + (e,)
        cycles.append(Cycle(cyc_vs, cyc_es))
        for w in stack_v[j + 1 :]:
            del pos[w]
        del stack_v[j + 1 :]
        del stack_e[j:]
    if stack_e:
        return Path(tuple(stack_v), tuple(stack_e)), cycles
    return None, cycles


def _component_walks(
    g: Graph, comp: list[int], pair_odd: bool
) -> list[tuple[list[int], list[int]]]:
    """Euler-circuit walks of one component, virtual pairing edges removed.

    Returns a list of (vertex_seq, edge_id_seq) walks.  With pair_odd the
    odd-degree vertices are paired ascending through virtual edges and each
    returned walk is open (one per pair); otherwise all degrees must already
    be even and the single closed circuit is returned.
    """
    adjg = g.adjacency()
    edges: list[tuple[int, int, Optional[int]]] = []
    for u in comp:
        for v, eid in adjg[u]:
            if u < v:
                edges.append((u, v, eid))
    if not edges:
        return []
    deg = g.degrees()
    odd = sorted(v for v in comp if deg[v] % 2 == 1)
    if odd and not pair_odd:
        raise ValueError(f"odd-degree vertices present: {odd[:5]}")
    for i in range(0, len(odd), 2):
        edges.append((odd[i], odd[i + 1], None))

    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in comp}
    for idx, (u, v, _) in enumerate(edges):
        adj[u].append((idx, v))
        adj[v].append((idx, u))
    for v in comp:
        adj[v].sort(key=lambda t: (t[1], t[0]))
    used = [False] * len(edges)
    ptr = {v: 0 for v in comp}
    vseq, eseq = _euler_circuit(comp[0], adj, used, ptr)
    assert all(used) and len(eseq) == len(edges)

    virt = [i for i, idx in enumerate(eseq) if edges[idx][2] is None]
    if not virt:
        return [(vseq, [edges[idx][2] for idx in eseq])]

    k = len(eseq)
    first = virt[0]
    order = list(range(first + 1, k)) + list(range(0, first + 1))
    walks: list[tuple[list[int], list[int]]] = []
    cur_vs = [vseq[first + 1]]
    cur_es: list[int] = []
    for posn in order:
        idx = eseq[posn]
        assert cur_vs[-1] == vseq[posn]
        if edges[idx][2] is None:
            if cur_es:
                walks.append((cur_vs, cur_es))
            cur_vs = [vseq[posn + 1]]
            cur_es = []
        else:
            cur_es.append(edges[idx][2])
            cur_vs.append(vseq[posn + 1])
    return walks


def well_spread_path_cycle_decompose(g: Graph, mode: str = "euler") -> WellSpreadResult:
    """Partition E(g) into paths and cycles, endpoint multiplicity <= 2.

    euler mode emits exactly (#odd-degree vertices)/2 paths, each odd vertex
    serving as an endpoint exactly once.  paths_only mode additionally splits
    each cycle into two paths where the multiplicity budget allows; cycles
    that cannot be split are reported in ``infeasible`` (and stay cycles).
    """
    if mode not in ("euler", "paths_only"):
        raise ValueError(f"unknown mode {mode!r}")
    paths: list[Path] = []
    cycles: list[Cycle] = []
    for comp in g.components():
        for vs, es in _component_walks(g, comp, pair_odd=True):
            leftover, excised = _excise_walk(vs, es)
            cycles.extend(excised)
            if leftover is not None:
                paths.append(leftover)

    if mode == "euler":
        return WellSpreadResult(tuple(paths), tuple(cycles))

    mult: dict[int, int] = {}
    for p in paths:
        for v in (p.vertices[0], p.vertices[-1]):
            mult[v] = mult.get(v, 0) + 1
    kept: list[Cycle] = []
    for cyc in cycles:
        free = [i for i, v in enumerate(cyc.vertices) if mult.get(v, 0) == 0]
        if len(free) < 2:
            kept.append(cyc)
            continue
        i, j = free[0], free[1]
        vs, es = cyc.vertices, cyc.edge_ids
        first = Path(vs[i : j + 1], es[i:j])
        second = Path(vs[j:] + vs[: i + 1], es[j:] + es[:i])
        paths.extend([first, second])
        for v in (vs[i], vs[j]):
            mult[v] = mult.get(v, 0) + 2
    return WellSpreadResult(tuple(paths), tuple(kept), tuple(kept))


def _longest_back_edge_cycle(g: Graph, adj) -> Optional[Cycle]:
    """Longest cycle closable by a single DFS back edge, over all components.

    The DFS stack holds one vertex per depth, so any in-stack neighbor other
    than the parent is a proper ancestor and closes a simple cycle of length
    >= 3.  Returns None exactly when g is acyclic.
    """
    seen: set[int] = set()
    best: Optional[Cycle] = None
    for root in g.vertex_list():
        if root in seen:
            continue
        depth = {root: 0}
        pe: dict[int, tuple[int, int]] = {}  # child -> (parent, edge id)
        stack = [root]
        instack = {root}
        ptr = {root: 0}
        while stack:
            v = stack[-1]
            lst = adj[v]
            i = ptr[v]
            advanced = False
            while i < len(lst):
                w, eid = lst[i]
                i += 1
                if w not in depth:
                    depth[w] = depth[v] + 1
                    pe[w] = (v, eid)
                    ptr[v] = i
                    stack.append(w)
                    instack.add(w)
                    ptr[w] = 0
                    advanced = True
                    break
                if w in instack and (v not in pe or pe[v][1] != eid):
                    length = depth[v] - depth[w] + 1
                    if length >= 3 and (best is None or length > best.length):
                        ups = []
                        x = v
                        while x != w:
                            ups.append(x)
                            x = pe[x][0]
                        down = ups[::-1]
                        best = Cycle(
                            tuple([w] + down),
                            tuple([pe[x][1] for x in down] + [eid]),
                        )
            if not advanced:
                ptr[v] = i
                stack.pop()
                instack.discard(v)
        seen.update(depth)
    return best


def find_long_cycle_dfs(g: Graph, *, y_fraction: float = 1 / 3) -> Optional[Cycle]:
    """Long-cycle extraction via the unexplored/path/removed DFS process.

    Runs DFS on the largest component tracking the unexplored set U and the
    removed set R; the path P is snapshotted at the first moment |U| = |R|.
    P splits into consecutive X, Y, Z; a shortest X-Z path Q in G minus Y is
    found by multi-source BFS (its interior automatically avoids all of P),
    and Q plus the P-segment between its endpoints closes a simple cycle
    containing all of Y.  When X and Z are separated (Y is a separator, which
    well-expanding inputs rule out but sparse ones do not) the search falls
    back to the longest single-back-edge cycle, so None is returned only for
    acyclic inputs.
    """
    if g.n == 0 or g.m == 0:
        return None
    comp = max(g.components(), key=len)
    if len(comp) < 3:
        return None
    adj = g.adjacency()
    root = comp[0]

    unexplored = set(comp)
    unexplored.discard(root)
    u_count, r_count = len(comp) - 1, 0
    path = [root]
    ptr = {root: 0}
    snapshot: Optional[list[int]] = None
    while path:
        if u_count == r_count:
            snapshot = list(path)
            break
        v = path[-1]
        lst = adj[v]
        i = ptr[v]
        nxt = None
        while i < len(lst):
            w = lst[i][0]
            if w in unexplored:
                nxt = w
                break
            i += 1
        ptr[v] = i
        if nxt is None:
            path.pop()
            r_count += 1
        else:
            unexplored.discard(nxt)
            u_count -= 1
            path.append(nxt)
            ptr[nxt] = 0
    if snapshot is None or len(snapshot) < 3:
        return _longest_back_edge_cycle(g, adj)

    p = len(snapshot)
    y_len = max(1, min(int(y_fraction * p), p - 2))
    x_len = (p - y_len + 1) // 2
    X = snapshot[:x_len]
    Y = snapshot[x_len : x_len + y_len]
    Z = snapshot[x_len + y_len :]

    y_set = set(Y)
    z_set = set(Z)
    parent: dict[int, Optional[tuple[int, int]]] = {x: None for x in X}
    queue = deque(sorted(X))
    hit = None
    while queue and hit is None:
        v = queue.popleft()
        for w, eid in adj[v]:
            if w in y_set or w in parent:
                continue
            parent[w] = (v, eid)
            if w in z_set:
                hit = w
                break
            queue.append(w)
    if hit is None:
        return _longest_back_edge_cycle(g, adj)

    q_vs = [hit]
    q_es: list[int] = []
    cur = hit
    while parent[cur] is not None:
        prev, eid = parent[cur]
        q_vs.append(prev)
        q_es.append(eid)
        cur = prev
    q_vs.reverse()  # X endpoint first
    q_es.reverse()

    pos = {v: i for i, v in enumerate(snapshot)}
    ix, iz = pos[q_vs[0]], pos[hit]
    seg = snapshot[ix : iz + 1]
    seg_es = [g.edge_id(seg[t], seg[t + 1]) for t in range(len(seg) - 1)]
    cyc_vs = tuple(seg) + tuple(reversed(q_vs[1:-1]))
    cyc_es = tuple(seg_es) + tuple(reversed(q_es))
    return Cycle(cyc_vs, cyc_es)


def _back_edge_pass(
    g: Graph,
    adj: dict[int, list[tuple[int, int]]],
    alive: set[int],
    min_len: int,
    out: list[Cycle],
) -> int:
    """One DFS sweep extracting qualifying back-edge cycles in place.

    Per-vertex adjacency pointers only move forward, so a full pass is
    near-linear; cycles missed because their stack was truncated are picked
    up by later passes.
    """
    found = 0
    visited: set[int] = set()
    ptr = {v: 0 for v in g.vertices}
    for root in g.vertex_list():
        if root in visited:
            continue
        visited.add(root)
        stack_v = [root]
        stack_e: list[Optional[int]] = [None]
        depth = {root: 0}
        top = 1
        while stack_v:
            v = stack_v[-1]
            lst = adj[v]
            i = ptr[v]
            advanced = False
            while i < len(lst):
                w, eid = lst[i]
                if eid not in alive or eid == stack_e[-1]:
                    i += 1
                    continue
                j = depth.get(w)
                if j is not None:
                    if top - j >= min_len:
                        cyc_vs = tuple(stack_v[j:])
                        cyc_es = tuple(stack_e[j + 1 :]) + (eid,)
                        out.append(Cycle(cyc_vs, cyc_es))
                        alive.difference_update(cyc_es)
                        found += 1
                        # unmark the consumed vertices so this pass can
                        # descend through them again along surviving edges
                        for t in range(j + 1, top):
                            del depth[stack_v[t]]
                            visited.discard(stack_v[t])
                        del stack_v[j + 1 :]
                        del stack_e[j + 1 :]
                        top = j + 1
                        advanced = True
                        break
                    i += 1
                    continue
                if w in visited:
                    i += 1
                    continue
                ptr[v] = i + 1
                visited.add(w)
                depth[w] = top
                stack_v.append(w)
                stack_e.append(eid)
                top += 1
                advanced = True
                break
            if not advanced:
                ptr[v] = i
                stack_v.pop()
                stack_e.pop()
                del depth[v]
                top -= 1
    return found


def peel_long_cycles(g: Graph, min_len: int) -> tuple[list[Cycle], Graph]:
    """Greedily extract edge-disjoint cycles of length >= min_len.

    Each round tries the DFS long-cycle finder once, then runs back-edge
    sweeps until they stop producing; rounds repeat until neither search
    finds anything.  Maximality is relative to these searches (a second peel
    of the residual returns no cycles).
    """
    if min_len < 3:
        raise ValueError("min_len must be at least 3")
    alive = set(g.edge_ids)
    adj = g.adjacency()
    cycles: list[Cycle] = []
    while True:
        progress = False
        cyc = find_long_cycle_dfs(g.subview(edge_ids=alive))
        if cyc is not None and len(cyc.edge_ids) >= min_len:
            cycles.append(cyc)
            alive.difference_update(cyc.edge_ids)
            progress = True
        while _back_edge_pass(g, adj, alive, min_len, cycles):
            progress = True
        if not progress:
            break
    return cycles, g.subview(edge_ids=alive)


def eulerian_cycle_decompose(g: Graph) -> list[Cycle]:
    """Partition an even-degree graph's edges into simple cycles.

    Takes an Euler circuit per component and excises cycles at first vertex
    repeats, so every edge lands in exactly one simple cycle.  Raises
    ValueError when some vertex has odd degree.
    """
    cycles: list[Cycle] = []
    for comp in g.components():
        for vs, es in _component_walks(g, comp, pair_odd=False):
            leftover, excised = _excise_walk(vs, es)
            assert leftover is None
            cycles.extend(excised)
    return cycles
