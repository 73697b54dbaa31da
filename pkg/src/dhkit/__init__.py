"""Split and modular decomposition, and certifying recognition, for
distance-hereditary graphs and the class DH ∩ co-DH."""

from .classifier import (
    Certificate, ClassReport, InvariantViolation, certify, classify, fast_recognize,
    lemma_audit, verify_certificate,
)
from .graph import Graph, Graph6Error, complement, induced_subgraph, parse_graph6, to_graph6
from .iso import canonical_form, find_induced_embedding, is_induced_embedding
from .modular import modular_decomposition, validate_md
from .oracles import (
    SizeLimitError, all_modules, all_splits, class_obstruction, in_class_by_forbidden,
    is_dh_by_distances, is_dh_by_forbidden,
)
from .pruning import EliminationSequence, ReplayError, prune_dh, reduce_to_bull_check, replay
from .splittree import SplitTree, build_split_tree, class_condition, validate_split_tree
from .workbench import bench, census, cross_validate, enumerate_labeled, gen_instance

__version__ = "0.1.0"
