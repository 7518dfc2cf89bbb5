"""
hermburg CLI

Command-line interface for sampling, solving and verification runs.
"""

from hermburg.cli.main import app

__all__ = ["app"]
