"""Convergence scans, completeness checks, unit conversion and comparisons."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .eig import Spectrum
from .hamiltonian import ProblemDefinition
from .lattice import Lattice2D, make_lattice, points_to_m
from .problems import CONSTANTS, ReferenceSpectrum
from .solve import solve

SCAN_MODES = ("fixed_L_vary_N", "fixed_a_vary_N")


def to_wavenumbers(energy):
    """Hartree -> cm^-1."""
    return np.asarray(energy) * CONSTANTS.hartree_to_cm


def shift_to_ground(eigenvalues):
    """Subtract the lowest eigenvalue (sorted input) from every level."""
    values = np.asarray(eigenvalues)
    return values - values[0]


# --- Convergence scans -------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceScan:
    """Energies and relative errors of tracked states across grid sizes.

    The converged value per state is the mean over the 10 largest-N grids,
    so the scan is self-contained: no separate truth run is needed.
    """

    problem: str
    mode: str
    fixed_value: float           # the width L or the spacing a being held
    n_list: tuple[int, ...]
    state_indices: tuple[int, ...]
    energies: np.ndarray         # shape (len(n_list), len(state_indices))
    converged: np.ndarray        # per-state E_conv
    rel_errors: np.ndarray       # |E - E_conv| / |E_conv|

    def rows(self):
        """(N, state, energy, rel_error) tuples, one per grid and state."""
        for i, n in enumerate(self.n_list):
            for j, s in enumerate(self.state_indices):
                yield n, s, self.energies[i, j], self.rel_errors[i, j]

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("N,state,energy,rel_error\n")
            for n, s, e, r in self.rows():
                fh.write(f"{n},{s},{e:.15e},{r:.6e}\n")

    def write_gnuplot(self, path, state: int):
        """Two-column (N, rel_error) file for one tracked state."""
        j = self.state_indices.index(state)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# {self.problem} {self.mode} state {state}\n")
            fh.write("# N  rel_error\n")
            for i, n in enumerate(self.n_list):
                fh.write(f"{n} {self.rel_errors[i, j]:.6e}\n")


def convergence_scan(problem: ProblemDefinition, mode: str, n_list,
                     state_indices=(0,)) -> ConvergenceScan:
    """Re-solve the problem on a family of grids and track state energies.

    ``fixed_L_vary_N`` holds the problem's width L and refines the spacing;
    ``fixed_a_vary_N`` holds the problem's spacing a = L/N and widens the
    box.  The grid list must be ascending odd N with at least 12 entries so
    the 10-grid tail average is meaningful.
    """
    if mode not in SCAN_MODES:
        raise ValueError(f"mode must be one of {SCAN_MODES}, got {mode!r}")
    n_list = tuple(int(n) for n in n_list)
    if len(n_list) < 12:
        raise ValueError("need at least 12 grid sizes for a scan")
    if any(n % 2 == 0 for n in n_list):
        raise ValueError("grid sizes must be odd")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("grid sizes must be strictly ascending")
    state_indices = tuple(int(s) for s in state_indices)
    if max(state_indices) >= min(n_list):
        raise ValueError(
            f"state index {max(state_indices)} is not available on the "
            f"smallest grid (N = {min(n_list)})")

    grid0 = problem.grid
    fixed = grid0.L if mode == "fixed_L_vary_N" else grid0.a
    energies = np.empty((len(n_list), len(state_indices)))
    for i, n in enumerate(n_list):
        L = fixed if mode == "fixed_L_vary_N" else fixed * n
        grid = make_lattice(L, points_to_m(n))
        spectrum = solve(replace(problem, grid=grid))
        energies[i] = spectrum.eigenvalues[list(state_indices)].real

    converged = energies[-10:].mean(axis=0)
    rel_errors = np.abs(energies - converged) / np.abs(converged)
    return ConvergenceScan(problem=problem.name, mode=mode, fixed_value=fixed,
                           n_list=n_list, state_indices=state_indices,
                           energies=energies, converged=converged,
                           rel_errors=rel_errors)


def exponential_fit(scan: ConvergenceScan, state: int, floor: float = 1e-11):
    """Least-squares fit of log10(rel error) vs N over the pre-plateau region.

    The pre-plateau region is the leading run of grids whose error still
    exceeds ``floor``; once the error first dips below it the scan has hit
    the round-off plateau and later points carry no slope information.
    Returns (slope, correlation, n_points).
    """
    j = scan.state_indices.index(state)
    errs = scan.rel_errors[:, j]
    leading = 0
    while leading < len(errs) and errs[leading] > floor:
        leading += 1
    ns = np.asarray(scan.n_list[:leading], dtype=float)
    logs = np.log10(errs[:leading])
    if len(ns) < 2:
        raise ValueError("fewer than 2 pre-plateau grids; lower the floor")
    slope, _ = np.polyfit(ns, logs, 1)
    if len(ns) == 2:
        corr = -1.0 if slope < 0 else 1.0  # two points correlate exactly
    else:
        corr = float(np.corrcoef(ns, logs)[0, 1])
    return float(slope), corr, len(ns)


# --- Completeness of the discretized spectrum --------------------------------

def completeness_error(spectrum: Spectrum, ground: int = 0,
                       n_max: int | None = None):
    """Relative truncation error of sum_n <0|x|n><n|x|0> against <0|x^2|0>.

    Needs the full spectrum: the identity only resolves once the discretized
    continuum states are included.  With ``n_max=None`` the whole curve is
    returned as an array over n_max = 0..N-1, otherwise a single float.
    """
    if isinstance(spectrum.grid, Lattice2D):
        raise ValueError("completeness check is defined for 1D spectra")
    n_states = spectrum.n_states
    if spectrum.eigenvectors.shape[1] != n_states or n_states != spectrum.grid.N:
        raise ValueError("completeness check needs the full spectrum")
    if n_max is not None and not 0 <= n_max <= n_states - 1:
        raise ValueError(f"n_max must be in 0..{n_states - 1}, got {n_max}")
    a = spectrum.weight
    x = spectrum.grid.x
    psi0 = spectrum.eigenvectors[:, ground]
    x2_expect = a * np.sum(x**2 * np.abs(psi0) ** 2)
    # <0|x|n> with conjugation on the bra; generic for complex eigenvectors
    amps = a * (spectrum.eigenvectors.conj().T @ (x * psi0))
    partial = np.cumsum(np.abs(amps) ** 2)
    curve = np.abs(x2_expect - partial) / x2_expect
    if n_max is None:
        return curve
    return float(curve[n_max])


# --- Reference comparison ----------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    label: str
    computed: float
    reference: float
    abs_dev: float
    rel_dev: float | None     # None where the reference value is 0


@dataclass(frozen=True)
class ComparisonReport:
    problem: str
    reference: ReferenceSpectrum
    rows: tuple[ComparisonRow, ...]

    @property
    def max_abs_dev(self) -> float:
        return max(r.abs_dev for r in self.rows)

    @property
    def max_rel_dev(self) -> float:
        rels = [r.rel_dev for r in self.rows if r.rel_dev is not None]
        return max(rels) if rels else 0.0

    def max_rel_dev_above(self, min_reference: float) -> float:
        """Worst relative deviation over states whose reference magnitude is
        at least ``min_reference`` — relative errors against values quoted
        with one or two digits (a tiny tunneling splitting, say) are noise."""
        rels = [r.rel_dev for r in self.rows
                if r.rel_dev is not None and abs(r.reference) >= min_reference]
        return max(rels) if rels else 0.0

    def format_table(self) -> str:
        lines = [f"# {self.problem} vs {self.reference.citation} ({self.reference.unit})",
                 f"{'state':>6} {'computed':>16} {'reference':>16} {'abs dev':>12} {'rel dev':>12}"]
        for r in self.rows:
            rel = f"{r.rel_dev:.3e}" if r.rel_dev is not None else "-"
            lines.append(f"{r.label:>6} {r.computed:16.6f} {r.reference:16.6f} "
                         f"{r.abs_dev:12.3e} {rel:>12}")
        lines.append(f"# max abs dev {self.max_abs_dev:.3e}, max rel dev {self.max_rel_dev:.3e}")
        return "\n".join(lines)


def labeled_levels(spectrum: Spectrum, unit: str = "model", shifted: bool = False,
                   count: int | None = None) -> dict[str, float]:
    """State-label -> energy map in the requested unit, optionally shifted."""
    values = spectrum.eigenvalues.real
    if shifted:
        values = shift_to_ground(values)
    if unit == "cm-1":
        values = to_wavenumbers(values)
    elif unit not in ("hartree", "model"):
        raise ValueError(f"unknown unit {unit!r}")
    count = spectrum.n_states if count is None else count
    return {spectrum.state_label(n): float(values[n]) for n in range(count)}


def compare_to_reference(spectrum: Spectrum, ref: ReferenceSpectrum) -> ComparisonReport:
    """Per-state deviations of a computed spectrum from an embedded table."""
    computed = labeled_levels(spectrum, unit=ref.unit, shifted=ref.shifted)
    rows = []
    for label, ref_value in ref.values.items():
        if label not in computed:
            raise KeyError(
                f"state label {label!r} from reference {ref.problem!r} not "
                f"present in the computed spectrum (labels: {sorted(computed)[:12]}...)")
        ours = computed[label]
        abs_dev = abs(ours - ref_value)
        rel_dev = abs_dev / abs(ref_value) if ref_value != 0 else None
        rows.append(ComparisonRow(label=label, computed=ours, reference=ref_value,
                                  abs_dev=abs_dev, rel_dev=rel_dev))
    return ComparisonReport(problem=ref.problem, reference=ref, rows=tuple(rows))
