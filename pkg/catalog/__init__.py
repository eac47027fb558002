"""
Builtin root systems, parametric families and seeded random systems
"""
