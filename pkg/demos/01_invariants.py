# %% [markdown]
# # Invariant tables of graph states
#
# A graph on n vertices gives a lagrangian in F_2^{2n}, one qubit per
# party.  Its invariants h^{kj} are local cohomology dimensions of the
# exterior powers of the partition sheaf.

# %%
from stabhom import family, graph_lagrangian, invariant_table, local_invariants

for name, n in [("path", 2), ("path", 3), ("star", 4), ("cycle", 4)]:
    l, s = graph_lagrangian(family(name, n), 2)
    print(f"{name} on {n} vertices")
    print(invariant_table(l, s).format())
    print()

# %% [markdown]
# The first-order rows h^{1j} already separate the six- and seven-vertex
# families.

# %%
for name, n in [("star", 6), ("path", 6), ("cycle", 6), ("D", 6), ("E6", None), ("path", 7), ("E7", None)]:
    g = family(name, n)
    l, s = graph_lagrangian(g, 2)
    print(f"{name:<5} n={g.n}  h^1j = {local_invariants(l, s, 1)}")

# %% [markdown]
# The same generator formula works over any prime field, but the state it
# describes, and hence its invariants, depends on p.

# %%
for p in (2, 3, 5, 7):
    l, s = graph_lagrangian(family("cycle", 5), p)
    print(f"5-cycle over F_{p}:", local_invariants(l, s, 1))
