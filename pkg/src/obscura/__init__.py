"""Exact verification and rewriting for graded algebras with membership deformed commutation."""

from obscura.deformed_algebra import (
    DoubleAlgebra,
    Element,
    Generator,
    GradedAlgebra,
    Mode,
    WeylAlgebra,
    membership_factor,
    nonassociativity_witness,
    star_swap,
    weyl_reduce,
)
from obscura.factor_systems import (
    CommutationFactor,
    FactorSystem,
    check_cocycle_binary,
    check_cocycle_nary,
    check_epsilon_axioms,
    epsilon_from_pi,
)
from obscura.grading import GradingGroup
from obscura.membership import MembershipTable
from obscura.scalar_field import Scalar, scalar
from obscura.spec_loader import load_spec, parse_expression

__version__ = "0.1.0"
