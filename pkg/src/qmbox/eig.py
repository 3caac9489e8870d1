"""Diagonalization and spectrum packaging.

Two solver paths, chosen by the builder's structural hermitian_hint rather
than by sniffing the matrix: Hermitian input goes through the symmetric
solver and reports exactly real eigenvalues with orthonormal eigenvectors;
everything else goes through the general dense solver and keeps whatever
imaginary parts the matrix produces.  A real non-symmetric matrix therefore
yields an exactly real spectrum whenever its eigenvalues are real, while a
genuinely complex matrix shows its round-off imaginaries honestly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .lattice import Lattice1D, Lattice2D
from .operators import OperatorMatrix


class SolverError(RuntimeError):
    """Eigensolver failed to converge or received non-finite input."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted eigenpairs on a grid.

    Eigenvalues ascend by real part (ties by imaginary part); eigenvectors
    are columns normalized to weight * sum |psi_i|^2 = 1, the discrete
    version of the unit continuum norm, with weight a in 1D and ax*ay in 2D.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column n belongs to eigenvalues[n]
    residuals: np.ndarray     # ||H v - lambda v||_2 / ||H||_F per pair
    hermitian_path: bool
    grid: Lattice1D | Lattice2D
    parity: tuple[str, ...] | None = None         # "s" | "a" | "none" per state
    labels: tuple[str, ...] | None = None         # "0s", "0a", ... or plain index

    @property
    def n_states(self) -> int:
        return len(self.eigenvalues)

    @property
    def weight(self) -> float:
        return self.grid.cell if isinstance(self.grid, Lattice2D) else self.grid.a

    def state_label(self, n: int) -> str:
        if self.labels is not None:
            return self.labels[n]
        return str(n)


def diagonalize(op: OperatorMatrix, grid: Lattice1D | Lattice2D,
                n_states: int | None = None) -> Spectrum:
    """Eigendecomposition of a built Hamiltonian; full spectrum by default.

    Hermitian-path eigenvalues come back as a real array, so their imaginary
    parts are identically zero; the general path returns complex eigenvalues
    sorted by (Re, Im).  On the Hermitian path ``n_states`` restricts the
    decomposition to the lowest eigenpairs, which is much cheaper for big 2D
    grids; the general path always computes everything and truncates.
    """
    H = op.matrix
    if H.shape[0] != (grid.size if isinstance(grid, Lattice2D) else grid.N):
        raise ValueError("operator dimension does not match the grid")
    if not np.all(np.isfinite(H.real)) or (np.iscomplexobj(H) and not np.all(np.isfinite(H.imag))):
        raise SolverError("Hamiltonian contains non-finite entries")
    if n_states is not None and not 1 <= n_states <= H.shape[0]:
        raise ValueError(f"n_states must be in 1..{H.shape[0]}, got {n_states}")

    try:
        if op.hermitian_hint:
            if n_states is not None and n_states < H.shape[0]:
                from scipy.linalg import eigh
                w, v = eigh(H, subset_by_index=(0, n_states - 1))
            else:
                w, v = np.linalg.eigh(H)
        else:
            w, v = np.linalg.eig(H)
            order = np.lexsort((w.imag, w.real))
            w, v = w[order], v[:, order]
            if n_states is not None:
                w, v = w[:n_states], v[:, :n_states]
    except np.linalg.LinAlgError as err:
        raise SolverError(f"eigensolver did not converge: {err}") from None

    weight = grid.cell if isinstance(grid, Lattice2D) else grid.a
    norms = np.sqrt(weight * np.sum(np.abs(v) ** 2, axis=0))
    v = v / norms
    residuals = _residuals(H, w, v)
    return Spectrum(eigenvalues=w, eigenvectors=v, residuals=residuals,
                    hermitian_path=op.hermitian_hint, grid=grid)


def _residuals(H: np.ndarray, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    R = H @ v - v * w[None, :]
    return np.linalg.norm(R, axis=0) / np.linalg.norm(H)


def phase_fix(spectrum: Spectrum) -> Spectrum:
    """Rotate each eigenvector so its largest-|.| component is real positive.

    Deterministic and idempotent; keeps real arrays real (a sign flip).
    """
    v = spectrum.eigenvectors.copy()
    cols = np.arange(v.shape[1])
    pivots = np.argmax(np.abs(v), axis=0)
    lead = v[pivots, cols]
    magnitude = np.abs(lead)
    if np.iscomplexobj(v):
        scale = np.where(magnitude > 0, np.conj(lead) / np.where(magnitude > 0, magnitude, 1.0), 1.0)
        v = v * scale[None, :]
        # pin the pivot exactly real so a second application is a no-op
        v[pivots, cols] = np.where(magnitude > 0, magnitude, v[pivots, cols].real)
    else:
        scale = np.where(lead != 0, np.sign(lead), 1.0)
        v = v * scale[None, :]
    return replace(spectrum, eigenvectors=v)


def classify_parity(spectrum: Spectrum, threshold: float = 0.9) -> Spectrum:
    """Label 1D states s/a/none by their overlap with the index-reversed self.

    The overlap o = a * sum_i psi(-x_i) psi(x_i)* is +1 for an even state and
    -1 for an odd one on a symmetric grid; states of a non-symmetric problem
    land in between and are labeled "none".  Each parity class also gets its
    own quantum number counted upward in energy order, giving the familiar
    doublet labels 0s, 0a, 1s, ...
    """
    if isinstance(spectrum.grid, Lattice2D):
        raise ValueError("parity classification is defined for 1D spectra only")
    v = spectrum.eigenvectors
    overlaps = spectrum.weight * np.sum(v[::-1, :] * np.conj(v), axis=0)
    parity = []
    for o in overlaps.real:
        parity.append("s" if o > threshold else "a" if o < -threshold else "none")
    counters = {"s": 0, "a": 0}
    labels = []
    for n, p in enumerate(parity):
        if p == "none":
            labels.append(str(n))
        else:
            labels.append(f"{counters[p]}{p}")
            counters[p] += 1
    return replace(spectrum, parity=tuple(parity), labels=tuple(labels))
