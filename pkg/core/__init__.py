"""
Vee Insight - Core Module
Exact arithmetic, covector systems, vee and Kohno checks
"""

__version__ = "0.1.0"
