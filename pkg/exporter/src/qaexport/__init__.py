"""qaexport: offline linguistic annotation exporter for QA corpora."""

__version__ = "0.1.0"

from .pipeline import annotate
from .export import export_contexts, export_predictions, export_questions
