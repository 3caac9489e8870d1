"""Dense operator matrices on the periodic lattice.

The momentum operator is the nonlocal all-to-all lattice derivative obtained
by diagonalizing in Fourier space, so its matrix elements are exact for any
wave function whose momentum content fits the grid; there is no power-law
stencil error.  Everything that can stay real does stay real: the workhorse
is the real antisymmetric matrix for i*p, and Hamiltonian builders combine
it with diagonal matrices without ever leaving float64 unless a complex
potential forces them to.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .expr import Expression
from .lattice import Lattice1D, Lattice2D

GridFunction = Union[Expression, Callable, float, int]


class GridValueError(ValueError):
    """A grid function produced a non-finite value at a reported point."""


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense square operator acting on grid-sampled wave functions.

    ``hermitian_hint`` is structural: constructors set it when the build
    recipe guarantees Hermiticity, and the eigensolver trusts it to pick
    the symmetric fast path.  It is never inferred by numeric sniffing.
    """

    matrix: np.ndarray
    hermitian_hint: bool = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")


def _signed_offsets(N: int) -> np.ndarray:
    """Index-difference matrix j = i - k."""
    i = np.arange(N)
    return i[:, None] - i[None, :]


def momentum_ip(grid: Lattice1D) -> np.ndarray:
    """Real antisymmetric matrix of i*p; entries (pi/L)(-1)^j / sin(pi j/N)."""
    j = _signed_offsets(grid.N)
    with np.errstate(divide="ignore", invalid="ignore"):
        A = (np.pi / grid.L) * (-1.0) ** j / np.sin(np.pi * j / grid.N)
    np.fill_diagonal(A, 0.0)
    return A


def momentum_matrix(grid: Lattice1D) -> OperatorMatrix:
    """Hermitian momentum matrix p with zero diagonal (complex entries)."""
    return OperatorMatrix(-1j * momentum_ip(grid), hermitian_hint=True)


def momentum_squared_matrix(grid: Lattice1D) -> OperatorMatrix:
    """p^2 from its closed form (exact per entry, not a matrix square).

    Diagonal pi^2/(3 a^2) (1 - a^2/L^2); off-diagonal
    (2 pi^2/L^2) (-1)^j cos(pi j/N) / sin^2(pi j/N).
    """
    j = _signed_offsets(grid.N)
    with np.errstate(divide="ignore", invalid="ignore"):
        P = ((2 * np.pi**2 / grid.L**2) * (-1.0) ** j
             * np.cos(np.pi * j / grid.N) / np.sin(np.pi * j / grid.N) ** 2)
    np.fill_diagonal(P, np.pi**2 / (3 * grid.a**2) * (1 - grid.a**2 / grid.L**2))
    return OperatorMatrix(P, hermitian_hint=True)


def exp_ialpha_p(grid: Lattice1D, alpha: float) -> OperatorMatrix:
    """Translation operator exp(i*alpha*p), unitary for any real alpha.

    Entries (-1)^j/N * sin(pi alpha/a) / sin(pi (alpha + j a)/L).  Where
    alpha + j*a is a multiple of L the singularity is removable and the
    entry takes its limit value 1 (N is odd, so the sign factor drops out).
    """
    j = _signed_offsets(grid.N)
    arg = (alpha + j * grid.a) / grid.L
    with np.errstate(divide="ignore", invalid="ignore"):
        E = (-1.0) ** j / grid.N * np.sin(np.pi * alpha / grid.a) / np.sin(np.pi * arg)
    singular = np.abs(arg - np.round(arg)) < 1e-9
    return OperatorMatrix(np.where(singular, 1.0, E), hermitian_hint=False)


def grid_values(f: GridFunction, point_arrays: dict[str, np.ndarray],
                what: str = "grid function") -> np.ndarray:
    """Evaluate an Expression / callable / constant on grid points.

    Callables receive positional arrays in variable order (x[, y]).  A
    non-finite result raises GridValueError naming the offending point,
    which is how a mass-function pole inside the box gets caught before it
    silently corrupts a spectrum.
    """
    names = sorted(point_arrays)  # "x" or ("x", "y")
    shape = np.broadcast(*point_arrays.values()).shape
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if isinstance(f, Expression):
            extra = f.variables - set(names)
            if extra:
                raise GridValueError(f"{what} uses undeclared variables {sorted(extra)}")
            values = f.evaluate(point_arrays)
        elif callable(f):
            values = f(*(point_arrays[n] for n in names))
        else:
            values = float(f)
    values = np.broadcast_to(np.asarray(values, dtype=float), shape).copy()
    bad = ~np.isfinite(values)
    if np.any(bad):
        where = np.argwhere(bad)[0]
        at = ", ".join(f"{n}={point_arrays[n].reshape(shape)[tuple(where)]:.6g}"
                       for n in names)
        raise GridValueError(f"{what} is non-finite at grid point ({at})")
    return values


def diagonal_from_function(grid: Lattice1D, f: GridFunction) -> OperatorMatrix:
    """Diagonal matrix with entries f(x_i); f must be finite on every site."""
    return OperatorMatrix(np.diag(grid_values(f, {"x": grid.x})), hermitian_hint=True)


def embed_2d(op: OperatorMatrix, axis: str, grid2: Lattice2D) -> OperatorMatrix:
    """Embed a 1D operator into the tensor-product state space.

    With compound index I = i1 + (i2-1)*Nx (x fastest), an x-axis operator
    becomes kron(eye(Ny), A) and a y-axis operator kron(A, eye(Nx)).
    """
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    target = grid2.lx if axis == "x" else grid2.ly
    if op.dim != target.N:
        raise ValueError(
            f"operator dimension {op.dim} does not match {axis}-axis size {target.N}")
    if axis == "x":
        big = np.kron(np.eye(grid2.ly.N, dtype=op.matrix.dtype), op.matrix)
    else:
        big = np.kron(op.matrix, np.eye(grid2.lx.N, dtype=op.matrix.dtype))
    return OperatorMatrix(big, hermitian_hint=op.hermitian_hint)
