"""Multiplication-by-continuation operators on the Hardy space of a strip.

The operators are ``M_fbar Delta^{1/2}`` for bounded analytic ``f`` on
``-pi < Im zeta < 0``.  Submodules cover the grid and continuation machinery
(:mod:`.grid`, :mod:`.hardy`), symbol factorization (:mod:`.symbols`),
deficiency analysis (:mod:`.deficiency`), canonical extensions for square
symbols (:mod:`.extension`) and the command line (:mod:`.cli`).
"""

from importlib import resources

from .deficiency import (DeficiencyIndices, DeficiencyVector, FactorClass,
                         atomic_singular_deficiency_vectors, blaschke_deficiency_basis,
                         classify, deficiency_indices, eigenvalue_residual,
                         eigenvector_search, midline_truncated_basis, perturbation_criterion,
                         von_neumann_check)
from .errors import (GridMismatchError, InadmissibleOuterError, InvalidParameterError,
                     MembershipError, PoleProximityError, QuadratureError, SpecParseError,
                     StripHardyError, SymmetryAuditError)
from .extension import (CanonicalExtension, SquareSymbol, apply_extension,
                        apply_spectral_function, build_extension, polar_decomposition,
                        symmetry_audit)
from .grid import (BoundaryVector, FourierVector, StripGrid, dft, idft, inner_product,
                   l2_norm, make_grid)
from .hardy import (ContinuationResult, continue_to, delta_half, hardy_membership,
                    j_conjugate, pointwise_bound_check)
from .specfile import LoadedSpec, load_spec, parse_spec_text
from .symbols import (BlaschkeData, BlaschkeZero, OuterData, SingularData, SymbolSpec,
                      check_symmetry, eval_symbol, radial_modulus_profile, sample_boundary,
                      split_outer)

__version__ = "0.1.0"


def example_spec_path(name: str):
    """Path of a shipped example spec, e.g. ``example_spec_path("atomic_zero")``."""
    ref = resources.files(__package__) / "specs" / f"{name}.json"
    if not ref.is_file():
        raise FileNotFoundError(f"no shipped spec named {name!r}")
    return ref


def example_spec_names() -> list:
    return sorted(p.name[:-5] for p in (resources.files(__package__) / "specs").iterdir()
                  if p.name.endswith(".json"))
