from .results import CORE_COLUMNS, ExportError, ResultExporter, emit

__all__ = ["CORE_COLUMNS", "ExportError", "ResultExporter", "emit"]
