"""
Excel Export for Sweeps
Writes a sweep to a formatted workbook: a Summary sheet and the Sweep table
"""

import logging
from datetime import datetime
from typing import List, Optional

from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill
from openpyxl.utils import get_column_letter

from sweep import CSV_COLUMNS, SweepRow, exponent_trend

logger = logging.getLogger(__name__)

HEADER_FILL = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
OK_FILL = PatternFill(start_color="C6EFCE", end_color="C6EFCE", fill_type="solid")
BAD_FILL = PatternFill(start_color="FFC7CE", end_color="FFC7CE", fill_type="solid")


def export_sweep_to_excel(rows: List[SweepRow], filename: Optional[str] = None) -> str:
    """
    Export a sweep to an .xlsx file

    Args:
        rows: Sweep rows in index order
        filename: Optional filename (generates one if not provided)

    Returns:
        Path to created Excel file
    """
    if filename is None:
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        filename = f"spcert_sweep_{timestamp}.xlsx"

    wb = Workbook()
    create_sweep_sheet(wb, rows)
    create_summary_sheet(wb, rows)
    wb.save(filename)
    logger.info("wrote %d sweep rows to %s", len(rows), filename)
    return filename


def create_sweep_sheet(wb: Workbook, rows: List[SweepRow]):
    """One row per instance, injectivity highlighted"""
    ws = wb.active
    ws.title = "Sweep"

    for col, name in enumerate(CSV_COLUMNS, start=1):
        cell = ws.cell(1, col, name)
        cell.fill = HEADER_FILL
        cell.font = Font(bold=True, color="FFFFFF")
        cell.alignment = Alignment(horizontal='center')

    injective_col = CSV_COLUMNS.index('globally_injective') + 1
    for r, row in enumerate(rows, start=2):
        for col, name in enumerate(CSV_COLUMNS, start=1):
            ws.cell(r, col, getattr(row, name))
        ws.cell(r, injective_col).fill = OK_FILL if row.globally_injective else BAD_FILL

    for col, name in enumerate(CSV_COLUMNS, start=1):
        ws.column_dimensions[get_column_letter(col)].width = max(10, len(name) + 2)
    ws.freeze_panes = "A2"


def create_summary_sheet(wb: Workbook, rows: List[SweepRow]):
    ws = wb.create_sheet("Summary", 0)

    ws['A1'] = "Sum-Product Sweep"
    ws['A1'].font = Font(size=16, bold=True)

    families = sorted({row.family for row in rows})
    injective = sum(1 for row in rows if row.globally_injective)
    constants = [row.theorem_constant for row in rows if row.theorem_constant is not None]
    exponents = [row.effective_exponent for row in rows if row.effective_exponent is not None]

    summary = [
        ("Families:", ", ".join(families) or "-"),
        ("Instances:", len(rows)),
        ("Globally injective:", f"{injective} of {len(rows)}"),
        ("Smallest constant:", min(constants) if constants else "-"),
        ("Smallest exponent:", min(exponents) if exponents else "-"),
        ("Largest exponent:", max(exponents) if exponents else "-"),
    ]
    row = 3
    for label, value in summary:
        ws.cell(row, 1, label).font = Font(bold=True)
        ws.cell(row, 2, value)
        row += 1

    row += 1
    status = ws.cell(row, 1)
    if injective == len(rows):
        status.value = "All instances certified injective"
        status.fill = OK_FILL
    else:
        status.value = f"{len(rows) - injective} instance(s) with collisions - see Sweep sheet"
        status.fill = BAD_FILL

    row += 2
    ws.cell(row, 1, "Exponent by |A|").font = Font(bold=True)
    for size, exponent in exponent_trend(rows).items():
        row += 1
        ws.cell(row, 1, int(size))
        ws.cell(row, 2, float(exponent))

    ws.column_dimensions['A'].width = 22
    ws.column_dimensions['B'].width = 20
