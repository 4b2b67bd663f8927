"""Desk-scale laboratory for time-bounded instance complexity, its quantum
counterpart and the queasiness gap between them."""

__version__ = "0.1.0"
