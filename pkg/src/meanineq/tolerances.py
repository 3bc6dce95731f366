"""Central numerical tolerances.

Every check in the package reads its default from ``TOL``. Pass a modified
copy (``dataclasses.replace(TOL, det_tol=1e-8)``) where a caller needs to
loosen or tighten one of them.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    det_tol: float = 1e-10
    ortho_tol: float = 1e-10
    singular_tol: float = 1e-12
    svd_reconstruction: float = 1e-10
    product_rel: float = 1e-8
    weight_product: float = 1e-10
    exponent_tol: float = 1e-12
    ratio_floor: float = 1e-6
    gap_rel: float = 1e-6
    containment: float = 1e-9
    integrand_floor: float = -1e-10
    fd_step: float = 1e-4


TOL = Tolerances()
