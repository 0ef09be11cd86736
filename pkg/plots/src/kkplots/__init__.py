"""Figure rendering for the simulation CLI's CSV output.

Pure file-to-file: every plotted number comes from an input CSV, and the
only contract with the simulation package is the documented header of
each file.
"""

from .figures import FIGURE_KINDS, FigureSpec, render
from .reader import SchemaError, read_columns, require_columns

__version__ = "0.1.0"

__all__ = [
    "FIGURE_KINDS",
    "FigureSpec",
    "SchemaError",
    "__version__",
    "read_columns",
    "render",
    "require_columns",
]
