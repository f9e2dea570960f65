# %% [markdown]
# # Splitting off GHZ summands
#
# h^{12} counts all-party GHZ summands (twice that for two parties).
# Extraction finds each one explicitly and leaves the remainder in fresh
# symplectic coordinates.

# %%
from stabhom import family, ghz_extraction, graph_lagrangian, internal_sum, local_invariants

g, sg = graph_lagrangian(family("star", 4), 2)
a, sa = graph_lagrangian(family("path", 4), 2)
l, s = internal_sum(g, a, sg, sa)
print("qudits per party:", s.qudits)
print("h^1j of the sum:", local_invariants(l, s, 1))

count, transcript, rest, rest_structure = ghz_extraction(l, s)
print("GHZ summands:", count)
for step in transcript:
    print(" ", step["step"], "on", step["parties"])
print("remainder h^1j:", local_invariants(rest, rest_structure, 1))
print("path h^1j:     ", local_invariants(a, sa, 1))

# %% [markdown]
# Three-party states split completely whenever their cohomology vanishes.

# %%
from stabhom import PartyStructure, is_decomposable_3party, random_lagrangian

for seed in range(6):
    s = PartyStructure((2, 1, 1), 3)
    l = random_lagrangian(s, seed)
    print(seed, local_invariants(l, s, 1), "decomposable:", is_decomposable_3party(l, s))
