"""Character-sum walks modulo m and their random-walk model."""

__version__ = "0.1.0"
