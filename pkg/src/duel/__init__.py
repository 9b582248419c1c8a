"""Restricted-wager martingales: domination builders and adversarial casino sequences."""

__version__ = "0.1.0"
