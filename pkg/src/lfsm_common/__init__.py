"""
Common utilities for the LFSM toolkit
"""

__version__ = "1.0.0"
