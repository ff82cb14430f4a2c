"""Quantum-versus-classical PQ games: simulation, equilibria and entanglement traces."""

__version__ = "0.1.0"
