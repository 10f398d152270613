"""steerkit: steering and Bell-nonlocality analysis for two-qubit states.

Three mutually cross-checking routes decide whether a two-qubit state is
steerable / Bell nonlocal under given or optimal binary measurements:

* a closed-form coexistence criterion on steering-equivalent observables,
* CHSH and analog-CHSH values with their correlation-matrix maxima,
* semidefinite feasibility over deterministic hidden-variable strategies.
"""

from steerkit.backend import BACKEND

__all__ = ["BACKEND", "__version__"]
__version__ = "0.1.0"
