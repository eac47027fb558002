"""
Utility modules for Vee Insight
"""
