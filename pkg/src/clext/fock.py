"""Truncated number-basis matrices for the algebra generators.

The representation keeps the first ``dim`` number states |0> .. |dim-1>.
Ladder matrix elements follow the real non-negative square-root convention:
a |n> = sqrt(F(n)) |n-1>, so the only nonzero entries of ``a`` sit on the
superdiagonal, a[n-1, n] = sqrt(F(n)).  The cyclic generator is realized on
the number operator, T = diag(exp(2i pi n / lam)), and P_mu is the 0/1
indicator of the residue class n = mu (mod lam).

Truncation artifact: a @ adag is diagonal with entries F(n+1) except at the
top state, where the missing |dim> contribution leaves a zero.  adag @ a is
exact on every kept state.  Verifiers mask the artifact with an interior
margin instead of padding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraSpec, RepKind, classify, structure_function, structure_values
from .errors import DimensionTooLargeError, NonUnitaryTruncationError


@dataclass(frozen=True, eq=False)
class TruncatedFockRep:
    """Dense matrices for {a, adag, num, T, P_mu} on a dim-state truncation."""

    spec: AlgebraSpec
    dim: int
    a: np.ndarray
    adag: np.ndarray
    num: np.ndarray
    T: np.ndarray
    P: tuple[np.ndarray, ...]


def build_fock_rep(spec: AlgebraSpec, dim: int, dtype=np.complex128) -> TruncatedFockRep:
    """Build the truncated representation on ``dim`` number states.

    Bounded-from-below specs accept any dim >= 1; finite-dimensional specs
    accept dim up to their dimension.  ``dtype`` selects the complex matrix
    precision; square roots and diagonals are computed in the matching real
    dtype, which matters for long relation words checked at tight absolute
    tolerances.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rep_class = classify(spec)
    if rep_class.kind is RepKind.FINITE_DIM and dim > rep_class.dim:
        raise DimensionTooLargeError(
            f"spec admits a {rep_class.dim}-dimensional representation, requested dim {dim}"
        )
    rdtype = np.empty(0, dtype=dtype).real.dtype
    values = structure_values(spec, dim, dtype=rdtype)
    if np.any(values[1:] < 0):
        bad = int(np.argmax(values[1:] < 0)) + 1
        raise NonUnitaryTruncationError(f"F({bad}) < 0 inside the truncation window")

    n = np.arange(dim)
    a = np.zeros((dim, dim), dtype=dtype)
    a[n[:-1], n[1:]] = np.sqrt(values[1:])
    adag = a.conj().T.copy()
    num = np.diag(n.astype(rdtype))
    t_gen = np.diag(np.exp(2j * np.pi * n / spec.lam))
    projectors = tuple(
        np.diag((n % spec.lam == mu).astype(rdtype)) for mu in range(spec.lam)
    )
    for mat in (a, adag, num, t_gen, *projectors):
        mat.setflags(write=False)
    return TruncatedFockRep(spec=spec, dim=dim, a=a, adag=adag, num=num, T=t_gen, P=projectors)


def norm_coefficient(spec: AlgebraSpec, n: int) -> float:
    """Squared norm of (adag)^n |0>: the product F(1) F(2) ... F(n)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return float(math.prod(structure_function(spec, m) for m in range(1, n + 1)))


def casimir(rep: TruncatedFockRep) -> np.ndarray:
    """Casimir matrix F(num) - adag @ a; identically zero on the Fock space.

    The identity survives truncation exactly (including the top diagonal
    entry) because adag @ a never reaches past the kept states.
    """
    rdtype = np.empty(0, dtype=rep.a.dtype).real.dtype
    f_diag = np.diag(structure_values(rep.spec, rep.dim, dtype=rdtype)).astype(rep.a.dtype)
    return f_diag - rep.adag @ rep.a


def grading_sector(rep: TruncatedFockRep, mu: int) -> list[int]:
    """Basis indices of grading sector mu: {n < dim : n = mu (mod lam)}.

    ``a`` maps sector mu into sector mu-1 and ``adag`` into mu+1, mod lam.
    """
    if not 0 <= mu < rep.spec.lam:
        raise ValueError(f"sector index must lie in 0..{rep.spec.lam - 1}, got {mu}")
    return list(range(mu, rep.dim, rep.spec.lam))
