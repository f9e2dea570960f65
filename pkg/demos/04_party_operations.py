# %% [markdown]
# # Coarsening, discarding and products
#
# Merging parties can create invariants that no single party structure
# shows: the 6-cycle coarsened to four parties with two qubits on two of
# them reaches h^3 = 4.

# %%
from stabhom import coarsen, discard, external_sum, family, graph_lagrangian, invariant_table, local_invariants

l, s = graph_lagrangian(family("cycle", 6), 2)
for phi in ([0, 0, 1, 1, 2, 3], [0, 1, 1, 0, 2, 3]):
    lc, sc = coarsen(l, s, phi, 4)
    print(phi, "qudits", sc.qudits, "h^1j", local_invariants(lc, sc, 1))

# %% [markdown]
# Tracing out two leaves of GHZ_5 leaves a GHZ_3.

# %%
l, s = graph_lagrangian(family("star", 5), 2)
ld, sd = discard(l, s, [3, 4])
print("after discarding:", local_invariants(ld, sd, 1))

# %% [markdown]
# External products multiply tables: two EPR pairs on four parties have no
# first-order cohomology but h^{24} = 4.

# %%
a, sa = graph_lagrangian(family("path", 2), 2)
print(invariant_table(*external_sum(a, a, sa, sa)).format())
