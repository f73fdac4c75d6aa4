"""Isogeny-class censuses over finite fields, Weil polynomials, CM root
statistics and the additive-combinatorics hypersurface search."""
from .finite_field import FieldDescriptor, FieldElement, make_field, field_of_order
from .class_groups import class_number_forms, class_number_order, kronecker_symbol
from .ec_isogeny import (isogeny_class_size, isogeny_class_summary, isogeny_class_members,
                         enumerate_curves_by_trace, supersingular_j_invariants)
from .honda_tate import WeilPolynomialRecord, enumerate_weil_polynomials, census_scaling
from .cm_analytics import weil_root_profile, positivity_density, discriminant_report
from .addcomb import GroundSet, build_hypersurface, evaluate_R, hypersurface_search

__version__ = "0.1.0"
