"""Root existence for monic polynomial families via braid monodromy and exact group computations."""

from .braid import BraidWord, artin_is_trivial, exponent_sum, tau
from .errors import PolybraidError
from .family import Graph1Complex, PolyFamily, ScalarLoopSamples, mth_root_on_loop, winding_number
from .freegrp import FreeHom, FreeWord
from .permgroup import Permutation
from .polycore import MonicPoly, discriminant, roots, star_action
from .progroup import ProFreeGroup, StageMorphism, decide_star_conditions, dual_m_divisible
from .sl2z import IntMatrix2, psl_normal_form
from .tracking import loop_braid, solvability_verdict

__version__ = "0.1.0"

__all__ = [
    "BraidWord",
    "FreeHom",
    "FreeWord",
    "Graph1Complex",
    "IntMatrix2",
    "MonicPoly",
    "Permutation",
    "PolyFamily",
    "PolybraidError",
    "ProFreeGroup",
    "ScalarLoopSamples",
    "StageMorphism",
    "artin_is_trivial",
    "decide_star_conditions",
    "discriminant",
    "dual_m_divisible",
    "exponent_sum",
    "loop_braid",
    "mth_root_on_loop",
    "psl_normal_form",
    "roots",
    "solvability_verdict",
    "star_action",
    "tau",
    "winding_number",
]
