"""Mode algebra of the n-th derivative current.

Brackets of modes are central and governed by one polynomial.  We print that
polynomial, normal order a few words and check that the bracket comes out of
a residue pairing of Laurent monomials as well.
"""
from derivcft.algebra import AlgebraElement, StructureConstants, commutator, format_element, normal_order, structure_pi
from derivcft.kernels import mode_commutator_via_kernel

n = 1
c = StructureConstants(n)
print(f"Pi^({n})(m) for m = -4..4:", [structure_pi(n, m) for m in range(-4, 5)])
print("vanishes for |m| <=", n)

a = lambda m: AlgebraElement.mode(m, c)
print("[a_3, a_-3]   =", format_element(commutator(a(3), a(-3))))
print("a_2 a_-1 a_-2 =", format_element(normal_order((2, -1, -2), c)))

# same numbers from the contour kernel
for m in range(-4, 5):
    assert mode_commutator_via_kernel(n, m, -m) == structure_pi(n, m)
print("kernel route agrees for m = -4..4")
