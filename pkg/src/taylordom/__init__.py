"""Taylor domination for solutions of Poincare-type linear recurrences."""

__version__ = "0.1.0"
