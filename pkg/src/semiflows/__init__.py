"""Finite semiflows: enveloping monoids, dynamical properties and invariant measures."""

from .automorphisms import (
    AutGroup,
    acts_freely,
    automorphism_group,
    is_aut_equicontinuous,
    is_universally_transitive,
)
from .dynamics import (
    PropertyVector,
    Semiflow,
    equi_points,
    is_almost_periodic_point,
    is_distal,
    is_equicontinuous,
    is_sensitive,
    is_uap,
    is_wap,
    minimal_subsets,
    orbit,
    property_vector,
    proximal_relation,
    syndetic,
    transitivity_profile,
)
from .errors import InconsistencyError, ValidationError
from .ideals import left_ideal_report, minimal_left_ideals, verify_minimal_ideal_structure
from .measures import MeasurePolytope, RationalMeasure, invariant_measures, is_uniquely_ergodic
from .space import UniformSpace, ball, from_metric, from_relations
from .transformation import (
    Monoid,
    Transformation,
    generate_monoid,
    group_closure,
    idempotents,
    is_abelian,
    is_group,
    surjectivity_profile,
)

__version__ = "0.1.0"
