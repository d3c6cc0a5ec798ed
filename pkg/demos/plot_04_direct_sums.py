"""
Direct sums
===========

For ``A = A1 + A2`` a perturbation splits into one perturbation of each
summand plus cross terms between summands. For ``C^N`` the semigroup is
commutative, and in the right coordinates multiplication is componentwise.
"""

import numpy as np

from pertsemi import Algebra, merge_direct_sum, pert_cn_coordinates, sample_member, split_direct_sum

a = Algebra.parse("M2(R)+H")
m = sample_member(a, seed=7)
parts, cross = split_direct_sum(m)
print("summand dimensions:", [p.algebra.dim for p in parts])
print("cross terms:", [(t.i, t.j, t.forward.shape) for t in cross])
print("round trip error:", np.abs(merge_direct_sum(parts, cross, a).mat - m.mat).max())

###############################################################################
# Two elements of Pert(C^2) multiply coordinate by coordinate.

c2 = Algebra.parse("C^2")
x, y = sample_member(c2, seed=8), sample_member(c2, seed=9)
print(pert_cn_coordinates(x @ y))
print(pert_cn_coordinates(x) * pert_cn_coordinates(y))
