"""Noncommutative torus crossed products.

Exact integer/rational arithmetic (continued fractions, Smith normal forms,
SL(2,Z) generator words), the twisted group algebra, the Heisenberg-Weyl
representation and Weyl operators on R x Z_c, the equivalence bimodule with
both operator-valued inner products, and replayable Morita-equivalence
certificates for crossed products by finite and infinite cyclic groups.
"""

from ._nctori import *  # noqa: F401,F403
