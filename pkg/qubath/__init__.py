"""
    QUBATH = QUbit-in-a-BATH toolkit.

    Decoherence of a central qubit coupled to a bath of N spin-S particles:
    Heisenberg-XY and transverse Ising couplings, their mean-field and exact
    treatments, and the bosonic large-S limit.
"""

__version__ = "0.1.0"
