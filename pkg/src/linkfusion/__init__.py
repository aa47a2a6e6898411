"""Multimodal social link prediction: text, numeric and graph features fused by attention."""

from .word2vec import KERNEL_NAME

__version__ = "0.1.0"
__all__ = ["KERNEL_NAME", "__version__"]
