"""A small language for q-series identity claims: parser, printer, evaluator."""
from .ast import BaileyDoc, IdentityDoc, format_doc, format_expr
from .evaluate import eval_expr
from .parser import parse, parse_expr
from .verify import VerdictReport, verify, verify_bailey

__all__ = [
    "BaileyDoc",
    "IdentityDoc",
    "VerdictReport",
    "eval_expr",
    "format_doc",
    "format_expr",
    "parse",
    "parse_expr",
    "verify",
    "verify_bailey",
]
