"""Finite hemi-implicative lattices, hemi-Nelson algebras and their twist
representation."""

from .algebra import (
    CheckReport,
    Failure,
    FiniteAlgebra,
    Homomorphism,
    find_center,
    identity,
    load,
    subalgebra,
    validate,
    validate_homomorphism,
)
from .axioms import ClassId, axiom_set
from .catalog import (
    EnumerationSpec,
    catalog,
    enumerate_algebras,
    search_counterexample,
)
from .classes import check_class, is_member
from .errors import HemikitError
from .filters import (
    Congruence,
    FilterSet,
    classify_filter,
    congruence_from_filter,
    enumerate_congruences,
    enumerate_filters,
    filter_of_congruence,
    verify_correspondence,
)
from .terms import check_sentence, evaluate, parse, parse_sentence
from .twist import (
    alpha,
    check_C,
    check_CK,
    map_quotient,
    map_twist,
    quotient,
    rho,
    theta,
    theta_minus,
    twist,
    twist_representable,
)

__version__ = "0.1.0"
