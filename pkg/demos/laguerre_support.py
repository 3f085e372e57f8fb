"""Eigenpolynomials of the solvable restricted Hamiltonian and numerical
Gram-Schmidt under z^a e^{-z} / f(z; a)^2."""

from fractions import Fraction

from x2susy.laguerre import eigen_polys, gram_schmidt_support, restricted_matrix
from x2susy.x2spaces import ParamContext

ctx = ParamContext(Fraction(5, 2), 4, a1=1)
m = restricted_matrix(ctx)
print("restricted matrix (columns are images of phi_1..phi_4):")
for row in m.entries:
    print("  " + "  ".join("%8s" % x for x in row))

for ep in eigen_polys(ctx):
    print("eigenvalue %s: coords %s" % (ep.eigenvalue, [str(c) for c in ep.coords]))

r = gram_schmidt_support(ctx, 6)
for row in r["rows"]:
    print("n=%d  deviation %.2e" % (row["n"], row["deviation"]))
print(r["label"])
