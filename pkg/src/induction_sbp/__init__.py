"""SBP-SAT finite-difference schemes for the resistive magnetic induction equation."""

__version__ = "0.1.0"
