"""Central numerical policy: every tolerance used by the package lives here.

Each constant can be overridden through an environment variable of the same
name prefixed with ``INCOMPAT_`` (e.g. ``INCOMPAT_PSD_TOL=1e-8``).  Overrides
are read once at import time and are off by default.
"""

from __future__ import annotations

import os


def _from_env(name: str, default: float) -> float:
    raw = os.environ.get(f"INCOMPAT_{name}")
    return float(raw) if raw is not None else default


#: Max entry-wise |H - H^dagger| accepted as Hermitian.
HERM_TOL = _from_env("HERM_TOL", 1e-10)

#: Eigenvalues above -PSD_TOL count as positive semidefinite.
PSD_TOL = _from_env("PSD_TOL", 1e-9)

#: Max eigen-reconstruction residual ||H - V diag(w) V^dagger||_max.
EIG_TOL = _from_env("EIG_TOL", 1e-9)

#: Half-width of the borderline band around mu* = 0 when deciding verdicts.
DECIDE_EPS = _from_env("DECIDE_EPS", 1e-6)

#: SDP solver contract: maximum accepted duality gap.
SDP_GAP_TOL = _from_env("SDP_GAP_TOL", 1e-8)

#: SDP solver contract: maximum accepted equality-constraint residual.
SDP_EQ_TOL = _from_env("SDP_EQ_TOL", 1e-9)

#: Marginal residual accepted when validating a returned parent POVM.
PARENT_TOL = _from_env("PARENT_TOL", 1e-7)

#: Default half-width of the bracket returned by threshold bisection.
BISECT_TOL = _from_env("BISECT_TOL", 5e-4)

#: Entries of a commutator below this magnitude count as zero.
COMMUTATOR_TOL = _from_env("COMMUTATOR_TOL", 1e-9)
