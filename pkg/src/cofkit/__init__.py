"""Cofinality quantifiers over linear orders: syntax, semantics, tagging,
Skolem reduction, abstract elementary class checks and EF games."""

__version__ = "0.1.0"
