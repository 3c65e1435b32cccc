"""Differential-operator identities behind the mode relations.

Operators z^a D^b are kept in normal form and composed with Leibniz.
"""
from derivcft.kernels import LaurentDiffOp, base_kernel_operator, compose, contour_kernel, kernel_identity_check

D, Z = LaurentDiffOp.d, LaurentDiffOp.zeta
print("D z^2          =", compose(D(), Z(2)))
print("base kernel n=1 =", base_kernel_operator(1))
print("contour kernel  =", contour_kernel(1))
print("its transpose   =", contour_kernel(1).transpose())

for n in range(1, 11):
    assert kernel_identity_check(n).holds
print("identities hold for n = 1..10")
