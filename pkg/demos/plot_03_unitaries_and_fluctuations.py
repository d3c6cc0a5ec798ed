"""
Unitaries and inner fluctuations
================================

A unitary ``u`` gives the perturbation ``u (x) (u*)^o``, which acts on a
Dirac operator by conjugation and so leaves its spectrum unchanged. A
general perturbation moves the spectrum but keeps ``D`` hermitian.
"""

import numpy as np

from pertsemi import (
    Algebra,
    embed_unitary,
    fluctuate,
    hermitian_eigenvalues,
    random_dirac,
    random_unitary,
    sample_member,
    to_tensor,
    verify_rep_decomposition,
)

rng = np.random.default_rng(3)
D = random_dirac(4, rng)
print("spectrum of D:        ", np.round(D.spectrum(), 4))

###############################################################################
# Conjugating by an embedded element of Sp(2) (quaternionic 2x2, i.e. 4x4
# complex) gives an isospectral operator.

u = random_unitary("H", 2, seed=4)
D_u = fluctuate(embed_unitary(u), D)
print("after a unitary:      ", np.round(hermitian_eigenvalues(D_u), 4))

###############################################################################
# A generic perturbation of M2(H) changes the eigenvalues.

x = to_tensor(sample_member(Algebra.parse("M2(H)"), seed=5, scale=0.3))
print("after a perturbation: ", np.round(hermitian_eigenvalues(fluctuate(x, D)), 4))

###############################################################################
# In canonical coordinates the embedded unitary group acts block-diagonally.
# The block sizes are those of the trivial, symmetric-traceless and
# antisymmetric representations.

for field, n in [("C", 3), ("R", 3), ("H", 2)]:
    r = verify_rep_decomposition(field, n, samples=5, seed=6)
    print(r["group"], r["blocks"], "off-block residual %.1e" % r["max_off_block_residual"])
