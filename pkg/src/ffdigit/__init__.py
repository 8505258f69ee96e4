"""Sum-of-digits (Thue-Morse) patterns over finite fields: exact counting,
bound verification and certified empty pattern sets."""

from .errors import FFDigitError
from .ff_core import FieldContext, FieldElement, build_field

__all__ = ["FFDigitError", "FieldContext", "FieldElement", "build_field"]
__version__ = "0.1.0"
