"""Exact algebra for surfaces presented by labelled rooted trees.

The package turns a finite rooted tree whose non-root nodes carry rational
labels (or, equivalently, rational edge weights) into an explicit polynomial
presentation of a surface over the affine line, and then verifies everything
that can be checked mechanically: the syzygies between the generators, the
per-leaf coordinate charts, the decomposition of the special fiber, the
canonical locally nilpotent derivation with its kernel and degeneration
orders, and the comb criterion for a trivial Makar-Limanov invariant.

All arithmetic is exact (integers and ``fractions.Fraction``); nothing here
floats.
"""

from .corpus import CORPUS, corpus_document, corpus_entry, random_corpus
from .charts import (
    FiberComponent,
    HLaurent,
    charts_for,
    fiber_components,
    generic_trivialization,
    leaf_cover_failures,
    separation_failures,
    trivialization_failures,
    verify_embedding,
)
from .derivations import (
    Derivation,
    apply,
    build_derivation,
    fixed_point_order,
    h_order_failures,
    kernel_failures,
    nilpotency_trace,
    stability_certificate,
    stability_failures,
    triangularity_failures,
    verify_kernel,
    weight_bound,
)
from .emit import emit
from .errors import (
    CheckError,
    GdsError,
    InputError,
    ParseError,
    UsageError,
    ValidationError,
)
from .mlcomb import (
    CombNormalForm,
    MlReport,
    QHPData,
    comb_equations,
    comb_normal_form,
    ml_report,
    ml_trivial,
    ordinary_danielewski_form,
    qhp_quotient_data,
)
from .poly import H, Poly, Ring, T, VarId, W, X0, node_var, parse_poly
from .presentation import (
    Presentation,
    build_presentation,
    incomparable_minor,
    incomparable_pairs,
    matrix_columns,
    q_poly,
    q_rel,
    root_poly,
    sibling_poly,
    syzygy_check,
)
from .transform import (
    ChartExpansion,
    ConversionStep,
    ConversionTrace,
    labelled_to_weighted,
    sigma,
    weighted_to_labelled,
)
from .treedsl import TreeDocument, parse_tree, print_tree
from .trees import LabelledTree, RootedTree, WeightedTree, tree_from_paths
from .verify import CheckResult, VerifyReport, checks_for_document, run_verify

__version__ = "0.1.0"

__all__ = [
    "CORPUS",
    "ChartExpansion",
    "CheckError",
    "CheckResult",
    "CombNormalForm",
    "ConversionStep",
    "ConversionTrace",
    "Derivation",
    "FiberComponent",
    "GdsError",
    "H",
    "HLaurent",
    "InputError",
    "LabelledTree",
    "MlReport",
    "ParseError",
    "Poly",
    "Presentation",
    "QHPData",
    "Ring",
    "RootedTree",
    "T",
    "TreeDocument",
    "UsageError",
    "ValidationError",
    "VarId",
    "VerifyReport",
    "W",
    "WeightedTree",
    "X0",
    "apply",
    "build_derivation",
    "build_presentation",
    "charts_for",
    "checks_for_document",
    "comb_equations",
    "comb_normal_form",
    "corpus_document",
    "corpus_entry",
    "emit",
    "fiber_components",
    "fixed_point_order",
    "generic_trivialization",
    "h_order_failures",
    "incomparable_minor",
    "incomparable_pairs",
    "kernel_failures",
    "labelled_to_weighted",
    "leaf_cover_failures",
    "matrix_columns",
    "ml_report",
    "ml_trivial",
    "nilpotency_trace",
    "node_var",
    "ordinary_danielewski_form",
    "parse_poly",
    "parse_tree",
    "print_tree",
    "q_poly",
    "q_rel",
    "qhp_quotient_data",
    "random_corpus",
    "root_poly",
    "run_verify",
    "separation_failures",
    "sibling_poly",
    "sigma",
    "stability_certificate",
    "stability_failures",
    "syzygy_check",
    "trivialization_failures",
    "tree_from_paths",
    "triangularity_failures",
    "verify_embedding",
    "verify_kernel",
    "weight_bound",
    "weighted_to_labelled",
]
