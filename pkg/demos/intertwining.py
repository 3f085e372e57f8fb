"""Exact intertwining of the physical Hamiltonians for a generic parameter
set, checked in the algebra generated by z and z'."""

import time

from x2susy.qalgebra import verify_intertwining
from x2susy.verify import generic_ctx

ctx = generic_ctx("5/2", 3)
t = time.perf_counter()
rep = verify_intertwining(ctx)
for name, res in rep["checks"].items():
    print("%-22s %s" % (name, "zero" if res["zero"] else "NONZERO %s" % res.get("nonzero_orders")))
print("all identities exact: %s  (%.1fs)" % (rep["ok"], time.perf_counter() - t))
