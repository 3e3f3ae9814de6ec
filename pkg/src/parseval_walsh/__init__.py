"""Walsh matrices, Walsh frames, optimal frame splitting and discrepancy checks."""

from .errors import (InfeasibleParameterError, NotAFrameError, NumericalCheckError,
                     OrderTooLargeError, ValidationError)
from .frames import Frame
from .walsh import WalshMatrix, build_walsh_matrix, to_sequency
from .walsh_frames import build_reduced_walsh_frame, build_walsh_frame, split_half, split_reduced

__all__ = [
    "Frame", "WalshMatrix", "build_walsh_matrix", "to_sequency",
    "build_walsh_frame", "build_reduced_walsh_frame", "split_half", "split_reduced",
    "ValidationError", "NumericalCheckError", "OrderTooLargeError", "NotAFrameError",
    "InfeasibleParameterError",
]
