"""
Command modules for ncinequality subcommands.
"""

from .base import BaseCommand, CommandResult
from .derive import DeriveCommand
from .evaluate import EvaluateCommand
from .sweep import SweepCommand

__all__ = [
    "BaseCommand",
    "CommandResult",
    "DeriveCommand",
    "EvaluateCommand",
    "SweepCommand",
]
