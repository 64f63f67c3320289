"""Tokenization, answer normalization, edit alignment, keyboard and phonetic models."""

from .edits import (
    DELETE,
    INSERT,
    MATCH,
    SUBSTITUTE,
    TRANSPOSE,
    EditAlignment,
    EditOp,
    apply_ops,
    distance,
    edit_distance,
)
from .keyboard import QWERTY, KeyboardLayout, load_layout
from .normalize import apply_case_pattern, case_pattern, normalize_answer
from .phonetic import G2PTable, PhoneticForm, load_g2p, phonetic_encode
from .tokenize import NUMBER, PUNCTUATION, SYMBOL, WORD, Token, tokenize

__all__ = [
    "DELETE", "INSERT", "MATCH", "SUBSTITUTE", "TRANSPOSE",
    "EditAlignment", "EditOp", "apply_ops", "distance", "edit_distance",
    "QWERTY", "KeyboardLayout", "load_layout",
    "apply_case_pattern", "case_pattern", "normalize_answer",
    "G2PTable", "PhoneticForm", "load_g2p", "phonetic_encode",
    "NUMBER", "PUNCTUATION", "SYMBOL", "WORD", "Token", "tokenize",
]
