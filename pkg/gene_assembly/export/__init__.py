"""
Export Package

Graph codecs (JSON, DOT) and spreadsheet reports for verification campaigns.
"""

from .graph_formats import graph_from_json, graph_to_dot, graph_to_json
from .workbook import write_report_workbook

__all__ = ["graph_from_json", "graph_to_dot", "graph_to_json", "write_report_workbook"]
