"""contracta: exact checks for contractions of 2D superintegrable systems."""

__version__ = "0.1.0"
