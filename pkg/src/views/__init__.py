from .report_view import ReportView
