from .evaluate import Tables, estimate_cost, evaluate, evaluate_vectorized, truth_table
from .formula import (
    And, Exists, Forall, Formula, Fresh, Iff, Imp, Ind, Max, Not, Or, Sing, Subseteq, Union,
    conj, is_prenex, is_quantifier_free, prefix_and_matrix, relabel, to_text,
)
from .parser import parse
from .sentences import (
    StackedMatroid, axiom_sentences, axioms_conjunction, minor_sentence, random_prenex_sentence,
    random_qf, satisfies_stacked,
)
from .transform import normalize_prenex, public_names, rename_apart, to_prenex

__all__ = [
    "And", "Exists", "Forall", "Formula", "Fresh", "Iff", "Imp", "Ind", "Max", "Not", "Or", "Sing",
    "StackedMatroid", "Subseteq", "Tables", "Union", "axiom_sentences", "axioms_conjunction", "conj",
    "estimate_cost", "evaluate", "evaluate_vectorized", "is_prenex", "is_quantifier_free",
    "minor_sentence", "normalize_prenex", "parse", "public_names", "prefix_and_matrix", "random_prenex_sentence",
    "random_qf", "relabel", "rename_apart", "satisfies_stacked", "to_prenex", "to_text", "truth_table",
]
