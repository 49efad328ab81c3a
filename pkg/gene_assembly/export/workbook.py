"""
Spreadsheet export of verification campaign reports.
"""

import logging
from datetime import datetime
from typing import Any, Iterable, List, Mapping, Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side

from gene_assembly.oracle import CharacterizationReport, Disagreement


logger = logging.getLogger(__name__)

# Styling constants
HEADER_FONT = Font(bold=True, color="FFFFFF", size=11)
HEADER_FILL = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
HEADER_ALIGNMENT = Alignment(horizontal="center", vertical="center")

BORDER_STYLE = Border(
    left=Side(style='thin', color='000000'),
    right=Side(style='thin', color='000000'),
    top=Side(style='thin', color='000000'),
    bottom=Side(style='thin', color='000000')
)

CAMPAIGN_FILL = PatternFill(start_color="FFF2CC", end_color="FFF2CC", fill_type="solid")
CAMPAIGN_FONT = Font(bold=True, size=11)
FAILURE_FILL = PatternFill(start_color="F8CBAD", end_color="F8CBAD", fill_type="solid")

DATA_ALIGNMENT = Alignment(horizontal="center", vertical="center")

SUMMARY_HEADERS = ["Campaign", "Metric", "Value"]
SUMMARY_WIDTHS = {"A": 22, "B": 28, "C": 14}

DISAGREEMENT_HEADERS = ["String", "Rule set", "Corrected", "Literal", "Brute force", "m has out-edge"]
DISAGREEMENT_WIDTHS = {"A": 34, "B": 16, "C": 12, "D": 12, "E": 14, "F": 16}


def set_column_widths(ws, widths: Mapping[str, float]):
    for col, width in widths.items():
        ws.column_dimensions[col].width = width


def style_header_row(ws, headers: Sequence[str]):
    """Write and style row 1."""
    for col_idx, header in enumerate(headers, start=1):
        cell = ws.cell(row=1, column=col_idx, value=header)
        cell.font = HEADER_FONT
        cell.fill = HEADER_FILL
        cell.alignment = HEADER_ALIGNMENT
        cell.border = BORDER_STYLE
    ws.row_dimensions[1].height = 22
    ws.freeze_panes = "A2"


def _write_row(ws, row: int, values: Iterable[Any], fill: PatternFill = None):
    for col_idx, value in enumerate(values, start=1):
        cell = ws.cell(row=row, column=col_idx, value=value)
        cell.border = BORDER_STYLE
        cell.alignment = DATA_ALIGNMENT
        if fill is not None:
            cell.fill = fill


def add_summary_sheet(ws, reports: Mapping[str, Any]) -> int:
    """One block of metric rows per campaign; returns the next free row."""
    ws.title = "Summary"
    set_column_widths(ws, SUMMARY_WIDTHS)
    style_header_row(ws, SUMMARY_HEADERS)

    row = 2
    for campaign, report in reports.items():
        rows = report.summary_rows() + [("passed", "yes" if report.passed else "no")]
        for metric, value in rows:
            fill = FAILURE_FILL if metric == "passed" and not report.passed else None
            _write_row(ws, row, (campaign, metric, value), fill)
            head = ws.cell(row=row, column=1)
            head.fill = CAMPAIGN_FILL
            head.font = CAMPAIGN_FONT
            row += 1
    return row


def add_disagreement_sheet(wb: Workbook, title: str, items: List[Disagreement]):
    ws = wb.create_sheet(title)
    set_column_widths(ws, DISAGREEMENT_WIDTHS)
    style_header_row(ws, DISAGREEMENT_HEADERS)
    for row, item in enumerate(items, start=2):
        _write_row(ws, row, (
            item.string, item.ruleset,
            "yes" if item.corrected else "no",
            "yes" if item.literal else "no",
            "yes" if item.oracle else "no",
            "yes" if item.m_outgoing else "no",
        ))


def add_violation_sheet(wb: Workbook, title: str, lines: List[str]):
    ws = wb.create_sheet(title)
    set_column_widths(ws, {"A": 100})
    style_header_row(ws, ["Violation"])
    for row, line in enumerate(lines, start=2):
        _write_row(ws, row, (line,), FAILURE_FILL)


def write_report_workbook(filename: str, reports: Mapping[str, Any], info: Mapping[str, Any]):
    """
    Save campaign reports as a workbook.

    Args:
        filename: Output .xlsx path
        reports: Campaign name -> report (LemmaReport, CharacterizationReport
            or EquivalenceReport)
        info: Run parameters written to the info sheet
    """
    wb = Workbook()
    add_summary_sheet(wb.active, reports)

    for campaign, report in reports.items():
        if isinstance(report, CharacterizationReport):
            add_disagreement_sheet(wb, f"{campaign} literal", report.literal_disagreements)
            if report.corrected_disagreements:
                add_disagreement_sheet(wb, f"{campaign} corrected", report.corrected_disagreements)
            failures = report.certificate_failures
        else:
            failures = getattr(report, "violations", None) or getattr(report, "disagreements", [])
        if failures:
            add_violation_sheet(wb, f"{campaign} failures", failures)

    info_sheet = wb.create_sheet("Run info")
    info_sheet.column_dimensions['A'].width = 20
    info_sheet.column_dimensions['B'].width = 40
    info_data = [["Generated", datetime.now().strftime("%Y-%m-%d %H:%M:%S")]]
    info_data.extend([label, value] for label, value in info.items())
    for row_idx, (label, value) in enumerate(info_data, start=1):
        info_sheet.cell(row=row_idx, column=1, value=label)
        if value is not None and not isinstance(value, (int, float, str)):
            value = str(value)
        info_sheet.cell(row=row_idx, column=2, value=value)

    wb.save(filename)
    logger.info("wrote report workbook %s", filename)
