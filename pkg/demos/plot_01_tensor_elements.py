"""
Elements of the perturbation semigroup
======================================

A perturbation is a finite sum of tensors ``a (x) b^o`` with ``sum a b = 1``
that equals its own star image. Here we build a few by hand for M2(C),
look at their matrix realization and multiply them.
"""

import numpy as np

from pertsemi import Algebra, TensorElement, identity_element, is_normalized, is_self_adjoint, multiply, realize

A = Algebra.parse("M2(C)")
e11, e12, e21, e22 = (np.eye(2)[:, [i]] @ np.eye(2)[[j]] for i, j in [(0, 0), (0, 1), (1, 0), (1, 1)])

###############################################################################
# The unit is ``1 (x) 1^o``; its realization is the identity on C^4.

one = identity_element(A)
print(realize(one).mat.real)

###############################################################################
# ``e11 (x) e11 + e22 (x) e22`` satisfies both conditions.

x = TensorElement.from_terms(A, [(e11, e11), (e22, e22)])
print("normalized:", is_normalized(x), " self-adjoint:", is_self_adjoint(x))

###############################################################################
# ``e12 (x) e12`` is neither: its products sum to zero and the star image
# swaps it for ``e21 (x) e21``.

y = TensorElement.from_terms(A, [(e12, e12)])
print("normalized:", is_normalized(y), " self-adjoint:", is_self_adjoint(y))

###############################################################################
# Products are taken termwise, ``(a b') (x) (b' b)^o``, and the product of
# two members is again a member.

t = 0.3
z = TensorElement.from_terms(A, [(np.eye(2), np.eye(2) * (1 - t)), (e12 + e21, (e12 + e21) * t)])
print("z member:", is_normalized(z) and is_self_adjoint(z))
zz = multiply(z, z)
print("z*z member:", is_normalized(zz) and is_self_adjoint(zz))
print(np.round(realize(zz).mat.real, 3))
