"""Branched-Hamiltonian laboratory.

Classical branch curves of a velocity-dependent Lagrangian family, half-line
quantization of the momentum-space pseudo-potential W(p) = p + 2*gamma/sqrt(p)
under Dirichlet/Neumann/Robin conditions, fractional-order Bessel analysis of
the near-origin behaviour, and the large-gamma harmonic-oscillator limit.
"""

__version__ = "0.1.0"
