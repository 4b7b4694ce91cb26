"""
irrmeter: certified irrationality measures from explicit Padé approximants.
"""

__version__ = "1.0.0"
