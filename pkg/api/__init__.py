"""
API Module for molroots
Polynomial-system molecular optimization (H3+ restricted Hartree-Fock) solved
through Groebner multiplication matrices and Macaulay null spaces, plus a
statevector emulation of the quantum layer that would run the same eigenproblems.
"""

__version__ = "1.0.0"
