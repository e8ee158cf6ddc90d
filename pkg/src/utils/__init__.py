"""
Utility modules for result rendering
"""

from src.utils.serialization import render_report, report_to_text, rows_to_csv, to_json, write_report

__all__ = ['render_report', 'report_to_text', 'rows_to_csv', 'to_json', 'write_report']
