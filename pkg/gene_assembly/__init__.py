"""
Simple gene assembly - string and graph rewriting toolkit

Legal strings, the simple string pointer rules, extended overlap graphs,
graph rules gnr/sgpr, closed-form success checks and a brute-force oracle.
"""

__version__ = "1.0.0"

from gene_assembly.characterize import check_success, enumerate_successful_orderings, validate_ordering
from gene_assembly.graph_rules import apply_graph_rule, applicable_graph_rules
from gene_assembly.marked_graph import SimpleMarkedGraph, build_extended_overlap_graph
from gene_assembly.string_rules import applicable_rules, apply_reduction, apply_rule
from gene_assembly.strings import GeneString, parse_gene_string

__all__ = [
    "GeneString",
    "SimpleMarkedGraph",
    "applicable_graph_rules",
    "applicable_rules",
    "apply_graph_rule",
    "apply_reduction",
    "apply_rule",
    "build_extended_overlap_graph",
    "check_success",
    "enumerate_successful_orderings",
    "parse_gene_string",
    "validate_ordering",
]
