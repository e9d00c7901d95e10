"""Command-line front end for qadvantage."""

from cli.main import cli

__all__ = ['cli']
