"""Finite p-group quotients that separate conjugacy classes in free and surface groups."""

__version__ = "0.1.0"

from .words import Alphabet, Word, commutator, gamma, is_conjugate_free  # noqa: E402
from .pgroups import PHom, parse_group  # noqa: E402
from .magnus import order_exact_witness, residual_p_witness  # noqa: E402
from .separation import double_coset_decide, double_coset_witness, separate_conjugacy_free  # noqa: E402
from .amalgam import surface_amalgam, surface_separation_pipeline  # noqa: E402

__all__ = [
    "__version__",
    "Alphabet",
    "Word",
    "commutator",
    "gamma",
    "is_conjugate_free",
    "PHom",
    "parse_group",
    "residual_p_witness",
    "order_exact_witness",
    "separate_conjugacy_free",
    "double_coset_decide",
    "double_coset_witness",
    "surface_amalgam",
    "surface_separation_pipeline",
]
