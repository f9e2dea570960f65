# %% [markdown]
# # The duality pairing
#
# Classes in local degree i pair against classes of the orthogonal
# complement in degree |P| + 2 - i.  For a lagrangian L = L^⊥, so the
# pairing matrices are square and invertible.

# %%
from stabhom import PartyStructure, check_perfect, family, graph_lagrangian, middle_symplectic, random_lagrangian

l, s = graph_lagrangian(family("star", 5), 2)
ok, report = check_perfect(l, s)
for i, row in report.items():
    print(f"degree {i} <-> {row['dual_degree']}: {row['rows']}x{row['cols']}, rank {row['rank']}")
print("perfect:", ok)

# %% [markdown]
# Random states with several qudits per party over odd primes behave the same.

# %%
for seed in range(3):
    s = PartyStructure((2, 1, 1, 2), 5)
    ok, _ = check_perfect(random_lagrangian(s, seed), s)
    print(f"seed {seed}: perfect = {ok}")

# %% [markdown]
# In characteristic 2 with an even number of parties the middle degree
# carries an alternating nondegenerate form.  The 6-cycle has a 4-dimensional one.

# %%
l, s = graph_lagrangian(family("cycle", 6), 2)
print(middle_symplectic(l, s))
