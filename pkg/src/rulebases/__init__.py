"""Minimum-size bases for association rules under plain and closure-based redundancy."""
from .bases import (
    Basis,
    Kind,
    all_rules_count,
    bstar,
    double_support_bstar,
    is_gamma_antecedent,
    minmax_variant,
    minmin_variant,
    representative_rules,
    verify_completeness,
    verify_minimality,
)
from .closure import ClosedNode, ClosureLattice, close, enumerate_closures, hasse, minimal_generators
from .dataset import (
    Dataset,
    ItemSet,
    Rule,
    confidence,
    equivalent_by_reflexivity,
    parse_transactions,
    support,
)
from .entailment2 import (
    EntailmentVerdict,
    apply_2A,
    counterexample_search,
    prune_basis_2premise,
    two_premise_entails,
)
from .implications import ImplicationSet, gd_basis, implies, iteration_free_basis, logical_closure
from .redundancy import (
    DerivationTrace,
    Scheme,
    Tag,
    check_step,
    closure_redundant,
    covers,
    derive,
    plainly_redundant,
)

__all__ = [name for name in dir() if not name.startswith("_")]
