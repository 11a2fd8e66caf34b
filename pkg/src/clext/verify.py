"""Numerical verification of the algebra's defining relations.

Every relation is evaluated as a dense matrix difference LHS - RHS and
reduced to the maximum absolute entry over the truncation interior.  The
interior margin equals the relation's word length (the largest number of
ladder factors in any term), because each ladder factor can propagate the
truncation artifact at most one state down from the top.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MarginTooLargeError
from .fock import TruncatedFockRep

DEFAULT_TOL = 1e-12


def interior_projector(dim: int, margin: int) -> np.ndarray:
    """Diagonal 0/1 matrix keeping basis states 0 .. dim-1-margin."""
    if not 0 <= margin < dim:
        raise MarginTooLargeError(f"margin {margin} does not fit in dimension {dim}")
    keep = np.zeros(dim)
    keep[: dim - margin] = 1.0
    return np.diag(keep)


def interior_max_abs(mat: np.ndarray, margin: int) -> float:
    """Max |entry| of the interior block, i.e. of P_m @ mat @ P_m."""
    dim = mat.shape[0]
    if not 0 <= margin < dim:
        raise MarginTooLargeError(f"margin {margin} does not fit in dimension {dim}")
    k = dim - margin
    return float(np.max(np.abs(mat[:k, :k])))


@dataclass(frozen=True)
class RelationResidual:
    relation: str
    word_length: int
    margin: int
    residual: float
    passed: bool


@dataclass(frozen=True)
class ResidualReport:
    """Per-relation residuals with a shared tolerance and margin policy."""

    entries: tuple[RelationResidual, ...]
    tolerance: float
    dim: int
    margin_policy: str = field(default="word-length")

    @property
    def all_pass(self) -> bool:
        return all(entry.passed for entry in self.entries)

    @property
    def max_residual(self) -> float:
        return max(entry.residual for entry in self.entries)

    def entry(self, relation: str) -> RelationResidual:
        for item in self.entries:
            if item.relation == relation:
                return item
        raise KeyError(relation)

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "dim": self.dim,
            "margin_policy": self.margin_policy,
            "all_pass": self.all_pass,
            "relations": [
                {
                    "id": e.relation,
                    "word_length": e.word_length,
                    "margin": e.margin,
                    "residual": e.residual,
                    "pass": e.passed,
                }
                for e in self.entries
            ],
        }


def _collect(checks, tol: float, dim: int) -> ResidualReport:
    entries = []
    for relation, word_length, diffs in checks:
        if isinstance(diffs, np.ndarray):
            diffs = [diffs]
        residual = max(interior_max_abs(diff, word_length) for diff in diffs)
        entries.append(
            RelationResidual(
                relation=relation,
                word_length=word_length,
                margin=word_length,
                residual=residual,
                passed=residual <= tol,
            )
        )
    return ResidualReport(entries=tuple(entries), tolerance=tol, dim=dim)


def verify_defining_relations(rep: TruncatedFockRep, tol: float = DEFAULT_TOL) -> ResidualReport:
    """Check every defining relation, in both the T form and the P form.

    Covers the deformed commutator (against the cyclic generator powers and
    against the sector projectors), the number-operator ladder relations,
    the quommutation of a and adag with T, the projector shift relations,
    projector orthogonality and completeness, and the Hermiticity and
    unitarity conditions.  Failures show up as report entries, not errors.
    """
    spec = rep.spec
    lam = spec.lam
    a, adag, num, t_gen, proj = rep.a, rep.adag, rep.num, rep.T, rep.P
    dim = rep.dim
    identity = np.eye(dim, dtype=a.dtype)
    q = np.exp(2j * np.pi / lam)

    t_powers = [identity]
    for _ in range(lam):
        t_powers.append(t_powers[-1] @ t_gen)

    commutator = a @ adag - adag @ a
    kappa_side = identity + sum(
        spec.kappa[m - 1] * t_powers[m] for m in range(1, lam)
    )
    alpha_side = identity + sum(spec.alpha[m] * proj[m] for m in range(lam))

    checks = [
        ("t_cyclic", 0, t_powers[lam] - identity),
        ("commutator_T", 2, commutator - kappa_side),
        ("number_lowering", 1, num @ a - a @ num + a),
        ("number_raising", 1, num @ adag - adag @ num - adag),
        ("number_T_commutes", 0, num @ t_gen - t_gen @ num),
        ("quommutation_a", 1, a @ t_gen - q * (t_gen @ a)),
        ("quommutation_adag", 1, adag @ t_gen - np.conj(q) * (t_gen @ adag)),
        ("hermiticity_N", 0, num - num.conj().T),
        ("hermiticity_a", 0, adag.conj().T - a),
        ("unitarity_T", 0, t_gen.conj().T - np.diag(1.0 / np.diag(t_gen))),
        ("commutator_P", 2, commutator - alpha_side),
        ("number_P_commutes", 0, [num @ p - p @ num for p in proj]),
        ("sector_shift_a", 1, [a @ proj[m] - proj[(m - 1) % lam] @ a for m in range(lam)]),
        (
            "sector_shift_adag",
            1,
            [adag @ proj[m] - proj[(m + 1) % lam] @ adag for m in range(lam)],
        ),
        (
            "projector_orthogonality",
            0,
            [
                proj[m] @ proj[n] - (proj[m] if m == n else 0.0)
                for m in range(lam)
                for n in range(lam)
            ],
        ),
        ("projector_completeness", 0, sum(proj) - identity),
        ("hermiticity_P", 0, [p - p.conj().T for p in proj]),
    ]
    return _collect(checks, tol, dim)


def verify_projector_algebra(rep: TruncatedFockRep, tol: float = DEFAULT_TOL) -> ResidualReport:
    """Check the projector algebra and its Fourier relation to T.

    Residuals of P_mu P_nu - delta P_mu, sum(P) - 1, the reconstruction of
    each projector from the powers of T, and of each power of T from the
    projectors.  All operators are diagonal, so the margin is zero.
    """
    lam = rep.spec.lam
    dim = rep.dim
    proj = rep.P
    identity = np.eye(dim, dtype=rep.T.dtype)

    t_powers = [identity]
    for _ in range(lam - 1):
        t_powers.append(t_powers[-1] @ rep.T)

    from_t = [
        sum(np.exp(-2j * np.pi * mu * nu / lam) * t_powers[nu] for nu in range(lam)) / lam
        for mu in range(lam)
    ]
    from_p = [
        sum(np.exp(2j * np.pi * mu * nu / lam) * proj[mu] for mu in range(lam))
        for nu in range(lam)
    ]

    checks = [
        (
            "projector_orthogonality",
            0,
            [
                proj[m] @ proj[n] - (proj[m] if m == n else 0.0)
                for m in range(lam)
                for n in range(lam)
            ],
        ),
        ("projector_completeness", 0, sum(proj) - identity),
        ("projector_from_T", 0, [proj[mu] - from_t[mu] for mu in range(lam)]),
        ("T_from_projectors", 0, [t_powers[nu] - from_p[nu] for nu in range(lam)]),
    ]
    return _collect(checks, tol, dim)
