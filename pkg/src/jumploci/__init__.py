"""Resonance varieties, Gysin models and Alexander-side finiteness decisions in exact arithmetic."""

__version__ = "0.1.0"
