"""Wilson loops and spin networks on lattice gauge configuration spaces.

Evaluates spin networks on configurations of the compact matrix groups
U(n), SU(n), O(n), SO(n), Sp(n), and compiles invariant diagram operators
(slot permutations, pairings) into explicit signed products of Wilson
loops, with numerical and exact verification harnesses.
"""

from .diagrams import (
    FlipNormalization,
    Pairing,
    Permutation,
    cycles,
    enumerate_pairings,
    normalize_pairing,
    pairing_from_permutation,
    reversed_pair_count,
)
from .graphs import (
    Configuration,
    GaugeTransform,
    Graph,
    SignedEdge,
    SpanningTreeFix,
    align_configurations,
    bouquet,
    gauge_apply,
    holonomy,
    loops_based_at,
    spanning_tree_fix,
    wilson_loop,
)
from .groups import (
    GroupElement,
    GroupKind,
    MembershipReport,
    form_eval,
    haar_sample,
    membership_check,
    omega,
)
from .spinnet import (
    MixedSignature,
    WilsonProduct,
    apply_slot_transpose,
    brauer_operator,
    commutant_dimension,
    compile_orthosymplectic,
    compile_unitary,
    eval_spin_network,
    mixed_operator,
    perm_operator,
    span_rank,
)
from .verify import (
    ExperimentReport,
    commutant_report,
    conjugacy_fingerprint,
    enumerate_words,
    fingerprint_distance,
    run_diagram_suite,
    run_identity_suite,
    separation_experiment,
    word_eval,
)

__version__ = "0.1.0"

__all__ = [
    "Configuration",
    "ExperimentReport",
    "FlipNormalization",
    "GaugeTransform",
    "Graph",
    "GroupElement",
    "GroupKind",
    "MembershipReport",
    "MixedSignature",
    "Pairing",
    "Permutation",
    "SignedEdge",
    "SpanningTreeFix",
    "WilsonProduct",
    "align_configurations",
    "apply_slot_transpose",
    "bouquet",
    "brauer_operator",
    "commutant_dimension",
    "commutant_report",
    "compile_orthosymplectic",
    "compile_unitary",
    "conjugacy_fingerprint",
    "cycles",
    "enumerate_pairings",
    "enumerate_words",
    "eval_spin_network",
    "fingerprint_distance",
    "form_eval",
    "gauge_apply",
    "haar_sample",
    "holonomy",
    "loops_based_at",
    "membership_check",
    "mixed_operator",
    "normalize_pairing",
    "omega",
    "pairing_from_permutation",
    "perm_operator",
    "reversed_pair_count",
    "run_diagram_suite",
    "run_identity_suite",
    "separation_experiment",
    "span_rank",
    "spanning_tree_fix",
    "wilson_loop",
    "word_eval",
]
