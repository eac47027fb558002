"""
Purely non-local Hamiltonian operators on loops
"""
