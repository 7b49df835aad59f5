"""The scaling harness: generators, hard instances, and the CSV grid.

Four instance families ship with the harness: sparse and dense G(n,p),
all-even graphs (must close with zero leftovers), and the complete
bipartite family K_{2k+1, n-2k-1} whose every decomposition needs about
3n/2 pieces, giving a lower bound to measure the pipeline against.
"""

from cycledecomp.bench import (
    bench_scaling,
    gallai_lower_bound,
    gen_eulerian,
    gen_gallai_bipartite,
    gen_gnp,
    gen_regular,
)

g = gen_gnp(64, 0.2, seed=1)
print("gen_gnp(64, 0.2):", g)
print("gen_eulerian(64, 0.2): all degrees even:",
      all(d % 2 == 0 for d in gen_eulerian(64, 0.2, seed=1).degrees().values()))
print("gen_regular(64, 6): degrees:",
      sorted(set(gen_regular(64, 6, seed=1).degrees().values())))
bip = gen_gallai_bipartite(2, 64)
print(f"gen_gallai_bipartite(2, 64): {bip} "
      f"(every decomposition needs >= {gallai_lower_bound(2, 64)} pieces)")

# the bound approaches 3n/2 - n/(4k+2) from below as n grows
for k in (1, 2, 5):
    n = 4096
    print(f"  k={k}: bound({n}) = {gallai_lower_bound(k, n)} "
          f"= {gallai_lower_bound(k, n) / n:.4f} n")

# a small grid end to end: every instance is decomposed, validated, and
# measured; rows come back in deterministic (family, n, seed) order
print("\nbench_scaling on a reduced grid:")
csv_text = bench_scaling(
    families=("gnp8n", "gallai1", "eulerian"),
    sizes=(64, 128),
    seeds=(0,),
)
for line in csv_text.strip().splitlines():
    print(" ", line)
print("\n(the default grid is 6 families x 5 sizes x 5 seeds; "
      "run `cycledecomp bench --out results.csv`)")
