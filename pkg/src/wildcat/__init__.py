"""Java-style wildcard subtyping: decider, level-wise construction and law checks."""

from .construct import SubtypingGraph, construct, jsm_step
from .errors import WildcatError
from .model import NULL, OBJECT, ArgInterval, ClassTable, ClassType, Surface, ValidatedClassTable, validate_class_table
from .parser import load_table, parse_class_table, parse_type, render_type
from .subtyping import canonical_form, contains, is_subtype, is_well_formed

__version__ = "0.1.0"

__all__ = [
    "NULL",
    "OBJECT",
    "ArgInterval",
    "ClassTable",
    "ClassType",
    "Surface",
    "SubtypingGraph",
    "ValidatedClassTable",
    "WildcatError",
    "canonical_form",
    "construct",
    "contains",
    "is_subtype",
    "is_well_formed",
    "jsm_step",
    "load_table",
    "parse_class_table",
    "parse_type",
    "render_type",
    "validate_class_table",
]
