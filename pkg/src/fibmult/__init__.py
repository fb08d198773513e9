"""Verification and construction kernel for finite fibered multicategories."""
from . import catalog, kernels
from .cartesian import (CartesianStructure, CovariantSquare, ProductCertificate, SpecialTriangle, coreindex,
                        family_cartesian_structure, family_section, fibered_hom_monoid,
                        find_algebraic_product, find_opcartesian, find_universal_product,
                        products_equivalence_report, sums_products_report, triangles_cosquares_convert,
                        verify_cartesian_structure)
from .core import (ExplicitBase, FiberedMulticategory, FinSetBase, MonoidInM, SpecialSquare,
                   commute_endomorphisms, eckmann_hilton, special_lift, symmetry_action, verify_axioms,
                   verify_monoid)
from .fibration_bridge import (Pseudofunctor, family_fibration, fibchar_check, from_fibration,
                               grothendieck_unary)
from .fincat import FinCategory, FinFunctor, RuleCategory, classify_fibration
from .finset import FinMap, FinSet, skeleton
from .standard import build_standard, check_extensivity, gen_example
from .violations import Violation

__version__ = "0.1.0"
