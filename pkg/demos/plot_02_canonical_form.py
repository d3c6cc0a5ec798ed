"""
Canonical form and dimension count
==================================

In an adapted basis every realized perturbation becomes block upper
triangular with a fixed ``1`` in the corner, a row vector ``v`` and square
blocks constrained by a real structure. Counting free real parameters gives
the dimension of the semigroup.
"""

import numpy as np

from pertsemi import Algebra, canonicalize, closed_form_dimensions, sample_member
from pertsemi.oracle import affine_dimension

###############################################################################
# A random member of Pert(M2(C)) and its canonical matrix. The first column
# is ``e1``; entries are real or purely imaginary according to the pattern.

m = sample_member(Algebra.parse("M2(C)"), seed=1)
c = canonicalize(m)
np.set_printoptions(precision=3, suppress=True)
print(c.matrix)
print("reconstruction residual:", c.residual)

###############################################################################
# For M2(R) the ``v`` row only meets the symmetric block, and the
# antisymmetric block decouples.

print(canonicalize(sample_member(Algebra.parse("M2(R)"), seed=2)).matrix.real)

###############################################################################
# The closed-form count agrees with a brute-force rank computation straight
# from the defining conditions.

for text in ["C^3", "M2(C)", "M2(R)", "M3(R)", "H", "M2(H)", "M2(R)+H"]:
    a = Algebra.parse(text)
    print(f"{text:8s} closed form {closed_form_dimensions(a)['total']:4d}   oracle {affine_dimension(a):4d}")
