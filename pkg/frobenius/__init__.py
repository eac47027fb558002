"""
Frobenius structures induced by covector systems and polynomial potentials
"""
