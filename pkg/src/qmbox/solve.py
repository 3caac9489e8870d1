"""One-call pipeline: build the Hamiltonian, diagonalize, label the states."""

from __future__ import annotations

from .eig import Spectrum, classify_parity, diagonalize, phase_fix
from .hamiltonian import ProblemDefinition, build_hamiltonian
from .lattice import Lattice2D


def solve(problem: ProblemDefinition, n_states: int | None = None) -> Spectrum:
    """Spectrum of a problem, phase-fixed; 1D states carry parity labels.

    ``n_states`` limits a Hermitian decomposition to the lowest eigenpairs
    (the completeness machinery needs the full spectrum, so leave it None
    there).
    """
    op = build_hamiltonian(problem)
    spectrum = phase_fix(diagonalize(op, problem.grid, n_states=n_states))
    if not isinstance(problem.grid, Lattice2D):
        spectrum = classify_parity(spectrum)
    return spectrum
