"""Walk through the exceptional polynomial spaces and the operators that
preserve them, at one rational alpha."""

from fractions import Fraction

from x2susy.exactalg import Poly
from x2susy.quasiops import action_expansion, j_operator
from x2susy.x2spaces import Basis, membership, phi_tilde

a, N = Fraction(5, 2), 4

print("phi_n(z; %s):" % a)
for n in range(1, N + 1):
    print("  n=%d  %s" % (n, phi_tilde(n, a).pretty()))

basis = Basis([phi_tilde(n, a) for n in range(1, N + 1)])
for i in range(1, 5):
    op = j_operator(i, a, N)
    coords = [membership(op(phi_tilde(n, a)), basis) for n in range(1, N + 1)]
    print("J%d preserves the span: %s" % (i, all(c is not None for c in coords)))

# the closed-form action agrees with direct application
exp = action_expansion("J", 3, 2, a, N)
print("J3 phi_2 =", " + ".join("(%s) phi_%d" % (c, 2 + d) for d, c in exp.terms))

# the constant function is not mapped to a polynomial
print("J1 applied to 1 is polynomial:", j_operator(1, a, N)(Poly([1])).is_poly())
