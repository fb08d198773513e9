from .base import ExplicitBase, FinSetBase, arrow_category, point_category
from .multicategory import (FiberedMulticategory, SpecialSquare, identity_square, lifting_problems,
                            pullback_square_with, reindex_along, special_lift, symmetry_action,
                            verify_axioms)
from .monoids import (Endomorphism, MonoidInM, commutation_choices, commutation_flags,
                      commute_endomorphisms, eckmann_hilton, endomorphisms_commute, verify_monoid)

__all__ = [
    "ExplicitBase", "FinSetBase", "arrow_category", "point_category",
    "FiberedMulticategory", "SpecialSquare", "identity_square", "lifting_problems",
    "pullback_square_with", "reindex_along", "special_lift", "symmetry_action", "verify_axioms",
    "Endomorphism", "MonoidInM", "commutation_choices", "commutation_flags", "commute_endomorphisms",
    "eckmann_hilton", "endomorphisms_commute", "verify_monoid",
]
