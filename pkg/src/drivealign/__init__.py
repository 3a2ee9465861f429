"""Modular end-to-end driving stack with training-time text-embedding alignment."""

__version__ = "0.1.0"
