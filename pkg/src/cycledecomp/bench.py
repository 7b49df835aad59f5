"""Instance generators, the bipartite lower-bound family, and the scaling harness.

The harness decomposes every generated instance with the full driver,
validates the output, checks the family-specific piece bounds, and emits one
CSV row per (family, n, seed).  Any violation aborts the run with the
offending instance written to disk for reproduction.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import math
import os
import random
import time
from dataclasses import replace
from fractions import Fraction
from typing import Optional, Sequence

from .graph import Graph, format_edge_list, validate_decomposition
from .pipeline import PipelineConfig, decompose_logstar

DEFAULT_SIZES = (128, 256, 512, 1024, 2048)
DEFAULT_FAMILIES = ("gnp8n", "gnp05", "gallai1", "gallai2", "gallai5", "eulerian")
DEFAULT_SEEDS = (0, 1, 2, 3, 4)

CSV_COLUMNS = (
    "family",
    "n",
    "m",
    "seed",
    "cycles",
    "singles",
    "pieces",
    "pieces_per_n",
    "gallai_bound",
    "runtime",
)


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph, deterministic under seed."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    pairs = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                pairs.append((u, v))
    return Graph.from_edges(n, pairs)


def gen_gallai_bipartite(k: int, n: int) -> Graph:
    """Complete bipartite K_{2k+1, n-2k-1}: the piece-count lower-bound family."""
    if k < 0 or n < 2 * k + 2:
        raise ValueError("need n >= 2k+2")
    a = 2 * k + 1
    pairs = [(i, j) for i in range(a) for j in range(a, n)]
    return Graph.from_edges(n, pairs)


def gallai_lower_bound(k: int, n: int) -> int:
    """Fewest pieces any decomposition of gen_gallai_bipartite(k, n) can have.

    Every cycle alternates sides, so it uses at most 2|A| of the |A||B|
    edges, and every B-vertex has odd degree so it ends a non-cycle piece:
    |B| + (|A||B| - |B|) / (2|A|), rounded up.
    """
    if k < 0 or n < 2 * k + 2:
        raise ValueError("need n >= 2k+2")
    a = Fraction(2 * k + 1)
    b = Fraction(n - 2 * k - 1)
    bound = b + (a * b - b) / (2 * a)
    return math.ceil(bound)


def gen_eulerian(n: int, p: float, seed: int) -> Graph:
    """Random graph with parity repaired: all degrees even, seeded.

    Odd-degree vertices are cancelled in pairs by deleting a shortest path
    between them; interior vertices lose degree 2, so only the two endpoint
    parities flip.  Every component always holds an even number of odd
    vertices, so a partner is always reachable.
    """
    g = gen_gnp(n, p, seed)
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    tab = g.edge_table
    for eid in g.edge_id_list():
        u, v = tab[eid]
        adj[u].add(v)
        adj[v].add(u)
    while True:
        odd = [v for v in range(n) if len(adj[v]) % 2]
        if not odd:
            break
        x = odd[0]
        parent: dict[int, Optional[int]] = {x: None}
        frontier = [x]
        target = -1
        while frontier and target < 0:
            nxt: list[int] = []
            for a in frontier:
                for b in sorted(adj[a]):
                    if b in parent:
                        continue
                    parent[b] = a
                    if len(adj[b]) % 2:
                        target = b
                        break
                    nxt.append(b)
                if target >= 0:
                    break
            frontier = nxt
        assert target >= 0, "component parity invariant broken"
        cur = target
        while parent[cur] is not None:
            prv = parent[cur]
            adj[cur].discard(prv)
            adj[prv].discard(cur)
            cur = prv
    pairs = sorted((u, v) for u in range(n) for v in adj[u] if u < v)
    return Graph.from_edges(n, pairs)


def gen_regular(n: int, d: int, seed: int) -> Graph:
    """Random d-regular graph by stub pairing with simplicity rejection."""
    if d < 0 or d >= n:
        raise ValueError("need 0 <= d < n")
    if n * d % 2:
        raise ValueError("n*d must be even")
    rng = random.Random(seed)
    for _ in range(200):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        adj: dict[int, set[int]] = {v: set() for v in range(n)}
        wedged = False
        while stubs and not wedged:
            # draw stub pairs; reject loops and repeats locally, restart on wedge
            for _ in range(200):
                i = rng.randrange(len(stubs))
                j = rng.randrange(len(stubs))
                if i == j:
                    continue
                u, v = stubs[i], stubs[j]
                if u != v and v not in adj[u]:
                    break
            else:
                wedged = True
                continue
            adj[u].add(v)
            adj[v].add(u)
            for idx in sorted((i, j), reverse=True):
                stubs[idx] = stubs[-1]
                stubs.pop()
        if not wedged:
            pairs = sorted((u, v) for u in adj for v in adj[u] if u < v)
            return Graph.from_edges(n, pairs)
    raise RuntimeError(f"could not realize a simple {d}-regular graph on {n} vertices")


class BenchFailure(Exception):
    """A benchmark instance violated validity or a family bound."""

    def __init__(self, message: str, repro_path: Optional[str] = None):
        super().__init__(message)
        self.repro_path = repro_path


def _make_instance(family: str, n: int, seed: int) -> tuple[Graph, Optional[int]]:
    if family == "gnp8n":
        return gen_gnp(n, min(1.0, 8 / n), seed), None
    if family == "gnp05":
        return gen_gnp(n, 0.5, seed), None
    if family.startswith("gallai"):
        k = int(family[len("gallai"):])
        return gen_gallai_bipartite(k, n), gallai_lower_bound(k, n)
    if family == "eulerian":
        return gen_eulerian(n, min(1.0, 8 / n), seed), None
    raise ValueError(f"unknown family {family!r}")


def _bench_one(family: str, n: int, seed: int, cfg: PipelineConfig) -> dict:
    g, bound = _make_instance(family, n, seed)
    run_cfg = replace(cfg, rng_seed=seed)
    t0 = time.perf_counter()
    dec, _ = decompose_logstar(g, run_cfg)
    dt = time.perf_counter() - t0
    problems: list[str] = []
    rep = validate_decomposition(g, dec)
    if not rep.ok:
        problems.extend(rep.problems)
    pieces = len(dec.cycles) + len(dec.single_edges)
    if family.startswith("gnp") and pieces > 32 * n:
        problems.append(f"pieces {pieces} above the 32n ceiling {32 * n}")
    if bound is not None and pieces < bound:
        problems.append(f"pieces {pieces} below the proven floor {bound}")
    if family == "eulerian" and cfg.eulerian_finish and dec.single_edges:
        problems.append(f"{len(dec.single_edges)} single edges on an all-even input")
    return {
        "family": family,
        "n": n,
        "m": g.m,
        "seed": seed,
        "cycles": len(dec.cycles),
        "singles": len(dec.single_edges),
        "pieces": pieces,
        "pieces_per_n": f"{pieces / n:.4f}",
        "gallai_bound": "" if bound is None else bound,
        "runtime": f"{dt:.3f}",
        "_problems": problems,
        "_graph": g if problems else None,
    }


def bench_scaling(
    families: Sequence[str] = DEFAULT_FAMILIES,
    sizes: Sequence[int] = DEFAULT_SIZES,
    cfg: Optional[PipelineConfig] = None,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    *,
    out: Optional[str] = None,
    workers: int = 1,
) -> str:
    """Run the scaling grid and return the CSV text (also written to out).

    Rows are merged in (family, n, seed) order regardless of worker count,
    so a fixed grid and seeds reproduce the same table (runtime column
    aside).  The first bound or validity violation raises BenchFailure with
    the instance saved beside the output file.
    """
    if cfg is None:
        cfg = PipelineConfig.engineering()
    for f in families:
        if f not in ("gnp8n", "gnp05", "eulerian") and not (
            f.startswith("gallai") and f[len("gallai"):].isdigit()
        ):
            raise ValueError(f"unknown family {f!r}")
    tasks = sorted((f, n, s) for f in families for n in sizes for s in seeds)
    rows: list[dict] = []
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_bench_one, f, n, s, cfg) for f, n, s in tasks]
            rows = [ft.result() for ft in futs]
    else:
        rows = [_bench_one(f, n, s, cfg) for f, n, s in tasks]
    rows.sort(key=lambda r: (r["family"], r["n"], r["seed"]))

    for row in rows:
        if row["_problems"]:
            g = row["_graph"]
            base = os.path.dirname(out) if out else "."
            path = os.path.join(
                base or ".",
                f"bench_failure_{row['family']}_{row['n']}_{row['seed']}.edges",
            )
            with open(path, "w") as fh:
                fh.write(f"# family={row['family']} n={row['n']} seed={row['seed']}\n")
                fh.write(format_edge_list(g))
            raise BenchFailure(
                f"{row['family']} n={row['n']} seed={row['seed']}: "
                + "; ".join(row["_problems"]),
                repro_path=path,
            )

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row[k] for k in CSV_COLUMNS})
    text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    return text
