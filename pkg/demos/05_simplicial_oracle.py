# %% [markdown]
# # Polyhedra and the codimension-one cross-check
#
# For a hyperplane M of L the quotient sheaf FL/FM is determined by the
# polyhedron of subsets S with L ∩ G_S ⊆ M, and its local cohomology is
# the relative simplicial cohomology of that polyhedron, shifted by one.

# %%
import numpy as np

from stabhom import PartyStructure, Polyhedron, Subspace, dual, gamma_sphere, local_invariants_rel, polyhedron_of_closed, random_lagrangian
from stabhom.simplicial import codim1_gamma, codim1_oracle, reduced_cohomology_dims

gamma = polyhedron_of_closed([[0, 1], [1, 2], [3]], 4)
print("polyhedron:", gamma.face_sets())
print("dual:      ", dual(gamma).face_sets())

# %%
for n in range(1, 5):
    print(f"sphere on {2 * n} vertices, reduced cohomology:", reduced_cohomology_dims(gamma_sphere(n)))

# %%
s = PartyStructure((1, 2, 1, 1), 3)
l = random_lagrangian(s, 4)
m = Subspace.span(l.basis[1:], 3, s.dim)
print("polyhedron of (L, M):", codim1_gamma(l, m, s).face_sets())
print("sheaf route:     ", local_invariants_rel(l, m, s))
print("simplicial route:", [0] + codim1_oracle(l, m, s))
