"""String-constraint benchmark analysis toolkit.

Python surface over the native core: SMT-LIB parsing and printing, dialect
translation, structural analyses, formula transforms, the benchmark store,
and the Select/Extract query language.
"""

from ._smtquery import (
    ParseError,
    QuerySyntaxError,
    Script,
    Store,
    UnknownPredicate,
    UnknownTransform,
    apply_transform,
    constraint_kinds,
    content_hash,
    eval_structural_predicate,
    extractor_catalog,
    parse_script,
    predicate_catalog,
    print_script,
    regex_classification,
    run_query,
    structural_equal,
    transform_catalog,
    translate_25_to_26,
    upper_bounds,
    var_dep_edges,
    variable_counts,
)

__all__ = [
    "ParseError",
    "QuerySyntaxError",
    "Script",
    "Store",
    "UnknownPredicate",
    "UnknownTransform",
    "apply_transform",
    "constraint_kinds",
    "content_hash",
    "eval_structural_predicate",
    "extractor_catalog",
    "parse_script",
    "predicate_catalog",
    "print_script",
    "regex_classification",
    "run_query",
    "structural_equal",
    "transform_catalog",
    "translate_25_to_26",
    "upper_bounds",
    "var_dep_edges",
    "variable_counts",
]
