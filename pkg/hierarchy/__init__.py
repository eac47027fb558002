"""
Principal hierarchy and Lenard-Magri chains of polynomial structures
"""
