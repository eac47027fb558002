"""
Test package for Vee Insight
"""
