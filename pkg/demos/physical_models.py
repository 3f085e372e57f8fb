"""Evaluate the rational and hyperbolic partner potentials and check the
numeric properties: closed forms vs algebra, sector preservation, SUSY
breaking and the hyperbolic scaling law."""

from fractions import Fraction

import numpy as np

from x2susy import models as M
from x2susy.x2spaces import ParamContext

rational = M.make_model(1, ParamContext(2, 3, a1=2))
hyper = M.make_model(2, ParamContext(2, 3, a2=Fraction(1, 2)))

print("rational V-(1)   =", float(rational.V("-", np.array([1.0]))[0]))
print("hyperbolic V-(0) =", float(hyper.V("-", np.array([0.0]))[0]))

for name, m in (("rational", rational), ("hyperbolic", hyper)):
    cc = M.potential_crosscheck(m)["max_error"]
    pres = max(M.sector_preservation_numeric(m, s)["max_residual"] for s in ("-", "+"))
    print("%-10s crosscheck %.1e  preservation %.1e  SUSY %s" % (name, cc, pres, M.susy_breaking_classification(m)))

shape = M.shape_invariance_check(rational.ctx)
print("shape invariance: V+(a) - V-(a+N) = %.15f (std %.1e)" % (shape["mean"], shape["std"]))

for nu in (Fraction(1, 2), 4):
    print("scaling nu=%s: %.1e" % (nu, max(M.scaling_relation_check(hyper, nu)["errors"].values())))

# the same checks at quad precision
hq = M.make_model(2, hyper.ctx, prec=113)
print("113-bit scaling error: %.1e" % max(M.scaling_relation_check(hq, 4)["errors"].values()))
