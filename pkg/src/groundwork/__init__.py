"""Desk-scale workbench for finite categories, sheaves, and homological algebra."""

__version__ = "0.1.0"
