"""Block-wise product eBCH codec with an inner RS erasure code."""

from .codec import DECODER_MODES, BwpCodec, DecodeResult, make_codec
from .layout import LayoutPlan, describe_layout, plan_layout

__version__ = "0.1.0"

__all__ = [
    "BwpCodec", "DecodeResult", "DECODER_MODES", "make_codec",
    "LayoutPlan", "plan_layout", "describe_layout",
]
