"""Peak sidelobe level of binary sequences: kernels, tail bounds, exact and
Monte Carlo verification."""

__version__ = "0.1.0"

from .bounds import BoundSpec, proposition1_bound, table_row, threshold  # noqa: E402
from .seqcore import BinarySequence, psl, spectrum_direct, spectrum_transform  # noqa: E402

__all__ = [
    "BinarySequence",
    "BoundSpec",
    "proposition1_bound",
    "psl",
    "spectrum_direct",
    "spectrum_transform",
    "table_row",
    "threshold",
]
