"""Bosonic Hamiltonians, sector-shifted variants, and degeneracy clustering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import energy_values, structure_values
from .errors import LengthMismatchError
from .fock import TruncatedFockRep, grading_sector

DEFAULT_CLUSTER_TOL = 1e-8


def hamiltonian_h0(rep: TruncatedFockRep) -> np.ndarray:
    """Oscillator Hamiltonian (1/2){adag, a} as an exact diagonal matrix.

    Diagonal entries are the closed-form energies E_n rather than the
    truncated matrix product, which corrupts the top state.  Consistency
    with (F(n) + F(n+1))/2 is asserted internally.
    """
    rdtype = np.empty(0, dtype=rep.a.dtype).real.dtype
    energies = energy_values(rep.spec, rep.dim, dtype=rdtype)
    f_values = structure_values(rep.spec, rep.dim + 1, dtype=rdtype)
    average = (f_values[:-1] + f_values[1:]) / 2
    assert float(np.max(np.abs(energies - average))) <= 1e-13
    return np.diag(energies)


def shifted_hamiltonian(rep: TruncatedFockRep, shifts) -> np.ndarray:
    """Diagonal Hamiltonian with sector-dependent shifts.

    Entry n equals E_n + shifts[n mod lam] / 2.  Adding the same constant
    to every shift moves all energies by half that constant.
    """
    lam = rep.spec.lam
    shifts = np.asarray(shifts, dtype=float)
    if shifts.shape != (lam,):
        raise LengthMismatchError(f"expected {lam} sector shifts, got {shifts.shape}")
    rdtype = np.empty(0, dtype=rep.a.dtype).real.dtype
    energies = energy_values(rep.spec, rep.dim, dtype=rdtype)
    n = np.arange(rep.dim)
    return np.diag(energies + shifts.astype(rdtype)[n % lam] / 2)


@dataclass(frozen=True)
class Cluster:
    energy: float
    multiplicity: int
    members: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "multiplicity": self.multiplicity,
            "members": list(self.members),
        }


def degeneracy_profile(values, cluster_tol: float = DEFAULT_CLUSTER_TOL, drop_top: int = 0):
    """Cluster a list of energies into degenerate groups.

    Single-linkage clustering: values are sorted and split wherever a gap
    exceeds ``cluster_tol``.  With ``drop_top`` > 0 the last ``drop_top``
    positions of the input (the truncation top, where multiplets lose
    members) are excluded from the statistics: any cluster containing one
    of those positions is discarded entirely.

    Returns clusters sorted by energy ascending; member indices refer to
    positions in the input.
    """
    values = np.asarray(values, dtype=float)
    count = len(values)
    if count == 0:
        return []
    if not 0 <= drop_top < count:
        raise ValueError(f"drop_top {drop_top} does not fit in {count} values")
    order = np.argsort(values, kind="stable")
    groups = [[order[0]]]
    for idx in order[1:]:
        if values[idx] - values[groups[-1][-1]] > cluster_tol:
            groups.append([])
        groups[-1].append(idx)

    cutoff = count - drop_top
    clusters = []
    for group in groups:
        members = sorted(int(i) for i in group)
        if members[-1] >= cutoff:
            continue
        clusters.append(
            Cluster(
                energy=float(values[group].mean()),
                multiplicity=len(members),
                members=tuple(members),
            )
        )
    return clusters


@dataclass(frozen=True)
class SpectrumReport:
    """Levels, degeneracy clusters, and ground-state data of a diagonal Hamiltonian."""

    levels: tuple[tuple[int, float, int], ...]  # (n, energy, sector)
    clusters: tuple[Cluster, ...]
    ground: Cluster
    cluster_tol: float
    dropped_top: int

    def to_dict(self) -> dict:
        return {
            "cluster_tol": self.cluster_tol,
            "dropped_top": self.dropped_top,
            "levels": [
                {"n": n, "energy": energy, "sector": sector}
                for n, energy, sector in self.levels
            ],
            "clusters": [c.to_dict() for c in self.clusters],
            "ground": {"energy": self.ground.energy, "multiplicity": self.ground.multiplicity},
        }


def spectrum_report(
    rep: TruncatedFockRep,
    diagonal=None,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    drop_top: int = 0,
) -> SpectrumReport:
    """Spectrum of a diagonal Hamiltonian over the truncation.

    Defaults to the oscillator Hamiltonian; pass ``diagonal`` to profile a
    shifted variant instead.  Levels carry their grading sector; clusters
    follow :func:`degeneracy_profile`.
    """
    lam = rep.spec.lam
    if diagonal is None:
        diagonal = np.diag(hamiltonian_h0(rep))
    diagonal = np.asarray(diagonal, dtype=float)
    sectors = np.empty(rep.dim, dtype=int)
    for mu in range(lam):
        sectors[grading_sector(rep, mu)] = mu
    levels = tuple(
        (int(n), float(diagonal[n]), int(sectors[n])) for n in range(rep.dim)
    )
    clusters = tuple(degeneracy_profile(diagonal, cluster_tol, drop_top))
    if not clusters:
        raise ValueError("no clusters survive the truncation cutoff; increase dim")
    return SpectrumReport(
        levels=levels,
        clusters=clusters,
        ground=clusters[0],
        cluster_tol=cluster_tol,
        dropped_top=drop_top,
    )
