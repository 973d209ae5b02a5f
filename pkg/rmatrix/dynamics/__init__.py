"""Lax flows: factorisation solvers, RK4 integration and Toda lattices."""

from rmatrix.dynamics.factorization import GroupFactors, PropagationResult, factorise, propagate
from rmatrix.dynamics.lax_flows import IntegratorConfig, Trajectory, integrate
from rmatrix.dynamics.toda import CartanCoordinates, ShiftLattice, TodaChain

__all__ = [
    "GroupFactors",
    "PropagationResult",
    "factorise",
    "propagate",
    "IntegratorConfig",
    "Trajectory",
    "integrate",
    "CartanCoordinates",
    "ShiftLattice",
    "TodaChain",
]
