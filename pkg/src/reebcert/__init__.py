"""Cobordism-like modules on labeled Reeb spaces and top-homology certificates."""

from .algebra import (
    IntMatrix,
    QuotientModule,
    RingSpec,
    SNFResult,
    build_quotient,
    hnf_rows,
    snf,
)
from .complex import (
    CanonicalChain,
    LabeledComplex,
    Relation,
    ValidationReport,
    Verdict,
    canonical_chain,
    chain_boundary,
    classifier_compatible,
    classifier_verdict,
    curve_relations,
    strict_relations,
    theorem1_verdict,
    thm5_hypothesis_check,
    universal_quotient,
    validate,
)
from .fibers import (
    Classifier,
    FiberType,
    TypeRegistry,
    euler_characteristic,
    euler_parity_classifier,
    kernel_relations,
    sphere_classifier,
    unoriented_cobordism_class,
)
from .homology import homology_over, top_homology_with_quotient
from .scene import Scene, emit_scene, parse_scene

__version__ = "0.1.0"
