"""Asymptotic K-polynomials of Veronese subalgebras of multigraded series."""

from .errors import (DegenerateMap, EmptyInterior, InvalidInput, NotAcyclic, RankDeficient,
                     SizeLimit, VeroneseError)
from .intlat import MatrixConfig, build_config, gale_blocks
from .laurent import LaurentPoly, series_expand, sieve
from .polytope import fiber_polytope, is_degenerate, region_volumes, zonotope_build
from .veronese import (AsymptoticExpansion, c_coeff, codim_asymptotic, convergence_report,
                       k_polynomial, phi)
from .concavity import is_log_concave, is_quasi_concave
from .carries import build_carries, semigroup_check, verify_stochastic

__all__ = [
    "DegenerateMap", "EmptyInterior", "InvalidInput", "NotAcyclic", "RankDeficient",
    "SizeLimit", "VeroneseError", "MatrixConfig", "build_config", "gale_blocks",
    "LaurentPoly", "series_expand", "sieve", "fiber_polytope", "is_degenerate",
    "region_volumes", "zonotope_build", "AsymptoticExpansion", "c_coeff",
    "codim_asymptotic", "convergence_report", "k_polynomial", "phi",
    "is_log_concave", "is_quasi_concave", "build_carries", "semigroup_check",
    "verify_stochastic",
]
