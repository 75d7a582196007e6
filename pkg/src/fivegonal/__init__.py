"""Extra syzygies of 5-gonal canonical curves, computed over prime fields."""

__version__ = "0.1.0"
