"""Parameters and scalar structure of cyclic-group extended oscillator algebras.

An algebra of cyclic order ``lam`` is fixed by the complex couplings
``kappa_1 .. kappa_{lam-1}`` attached to the powers of the cyclic generator,
or equivalently by the real sector couplings ``alpha_0 .. alpha_{lam-1}``
attached to the sector projectors.  The two parameter sets are related by a
discrete Fourier transform over the lam-th roots of unity; reality of alpha
corresponds to the conjugation constraint conj(kappa_mu) = kappa_{lam-mu}.

Derived quantities:

* ``beta_mu``  partial sums of alpha (beta_0 = 0), entering the structure
  function F(n) = n + beta_{n mod lam},
* ``gamma_mu = beta_mu + alpha_mu / 2``, entering the oscillator energies
  E_n = n + 1/2 + gamma_{n mod lam}.

All parameter subscripts are understood mod lam.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    ConjugationViolationError,
    LengthMismatchError,
    NonUnitaryError,
    SumNotZeroError,
)

#: Tolerance for all parameter constraint checks.
CONSTRAINT_TOL = 1e-12


def _locked(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


def _partial_sums(alpha: np.ndarray) -> np.ndarray:
    """beta_mu = sum of alpha_0 .. alpha_{mu-1}, with beta_0 = 0."""
    return np.concatenate([np.zeros(1, dtype=alpha.dtype), np.cumsum(alpha)[:-1]])


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """Validated parameter set of one algebra of cyclic order ``lam``.

    Instances are immutable; build them through :func:`from_kappa` or
    :func:`from_alpha` rather than directly.
    """

    lam: int
    kappa: np.ndarray   # lam-1 complex couplings kappa_1 .. kappa_{lam-1}
    alpha: np.ndarray   # lam real sector couplings, sum zero
    beta: np.ndarray    # partial sums of alpha, beta_0 = 0
    gamma: np.ndarray   # beta + alpha / 2

    def __post_init__(self):
        if not isinstance(self.lam, (int, np.integer)) or self.lam < 2:
            raise ValueError(f"cyclic order must be an integer >= 2, got {self.lam!r}")
        object.__setattr__(self, "lam", int(self.lam))
        object.__setattr__(self, "kappa", _locked(np.asarray(self.kappa, dtype=complex)))
        object.__setattr__(self, "alpha", _locked(np.asarray(self.alpha, dtype=float)))
        object.__setattr__(self, "beta", _locked(np.asarray(self.beta, dtype=float)))
        object.__setattr__(self, "gamma", _locked(np.asarray(self.gamma, dtype=float)))

        lam = self.lam
        if self.kappa.shape != (lam - 1,):
            raise LengthMismatchError(f"kappa must have {lam - 1} entries, got {self.kappa.shape}")
        for name, vec in (("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)):
            if vec.shape != (lam,):
                raise LengthMismatchError(f"{name} must have {lam} entries, got {vec.shape}")

        mism = _conjugation_mismatch(self.kappa)
        if mism > CONSTRAINT_TOL:
            raise ConjugationViolationError(
                f"conj(kappa_mu) != kappa_(lam-mu), worst mismatch {mism:.3e}"
            )
        total = float(self.alpha.sum())
        if abs(total) > CONSTRAINT_TOL:
            raise SumNotZeroError(f"alpha must sum to zero, got sum = {total!r}")
        # beta and gamma must reproduce the defining arithmetic bit for bit
        if not np.array_equal(self.beta, _partial_sums(self.alpha)):
            raise ValueError("beta is not the exact partial-sum vector of alpha")
        if not np.array_equal(self.gamma, self.beta + self.alpha / 2):
            raise ValueError("gamma is not exactly beta + alpha/2")


def _conjugation_mismatch(kappa: np.ndarray) -> float:
    """Worst |conj(kappa_mu) - kappa_{lam-mu}| over mu = 1 .. lam-1."""
    lam = len(kappa) + 1
    if lam == 1:
        return 0.0
    mism = 0.0
    for mu in range(1, lam):
        mism = max(mism, abs(np.conj(kappa[mu - 1]) - kappa[lam - mu - 1]))
    return float(mism)


def _assemble(lam: int, kappa: np.ndarray, alpha: np.ndarray) -> AlgebraSpec:
    beta = _partial_sums(alpha)
    return AlgebraSpec(lam=lam, kappa=kappa, alpha=alpha, beta=beta, gamma=beta + alpha / 2)


def from_kappa(lam: int, kappa) -> AlgebraSpec:
    """Build a spec from the cyclic-generator couplings kappa_1 .. kappa_{lam-1}.

    The sector couplings follow from the Fourier sum
    alpha_mu = sum_nu exp(2i pi mu nu / lam) kappa_nu, which is real and
    sums to zero whenever kappa satisfies the conjugation constraint.
    The imaginary residue of the transform is checked against
    ``CONSTRAINT_TOL`` and then discarded.
    """
    kappa = np.asarray(kappa, dtype=complex)
    if kappa.shape != (lam - 1,):
        raise LengthMismatchError(f"kappa must have {lam - 1} entries, got {kappa.shape}")
    mism = _conjugation_mismatch(kappa)
    if mism > CONSTRAINT_TOL:
        raise ConjugationViolationError(
            f"conj(kappa_mu) != kappa_(lam-mu), worst mismatch {mism:.3e}"
        )
    mu = np.arange(lam)[:, None]
    nu = np.arange(1, lam)[None, :]
    alpha_c = (np.exp(2j * np.pi * mu * nu / lam) * kappa[None, :]).sum(axis=1)
    imag = float(np.max(np.abs(alpha_c.imag)))
    if imag > CONSTRAINT_TOL:
        raise ConjugationViolationError(f"alpha has imaginary residue {imag:.3e}")
    return _assemble(lam, kappa, alpha_c.real.copy())


def from_alpha(lam: int, alpha) -> AlgebraSpec:
    """Build a spec from the real sector couplings alpha_0 .. alpha_{lam-1}.

    Requires sum(alpha) = 0 within ``CONSTRAINT_TOL``; inputs violating the
    sum are rejected rather than renormalized.  The inverse Fourier sum
    kappa_nu = (1/lam) sum_mu exp(-2i pi mu nu / lam) alpha_mu then
    automatically satisfies the conjugation constraint.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (lam,):
        raise LengthMismatchError(f"alpha must have {lam} entries, got {alpha.shape}")
    total = float(alpha.sum())
    if abs(total) > CONSTRAINT_TOL:
        raise SumNotZeroError(f"alpha must sum to zero, got sum = {total!r}")
    nu = np.arange(1, lam)[:, None]
    mu = np.arange(lam)[None, :]
    kappa = (np.exp(-2j * np.pi * mu * nu / lam) * alpha[None, :]).sum(axis=1) / lam
    return _assemble(lam, kappa, alpha)


def structure_function(spec: AlgebraSpec, n: int) -> float:
    """Structure function F(n) = n + beta_{n mod lam}; F(0) = 0 always."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return float(n + spec.beta[n % spec.lam])


def structure_values(spec: AlgebraSpec, count: int, dtype=float) -> np.ndarray:
    """F(0) .. F(count-1) as an array, computed in the requested real dtype."""
    n = np.arange(count)
    beta = _partial_sums(spec.alpha.astype(dtype))
    return n.astype(dtype) + beta[n % spec.lam]


class RepKind(Enum):
    FINITE_DIM = "finite-dimensional"
    BOUNDED_FROM_BELOW = "bounded-from-below"


@dataclass(frozen=True, eq=False)
class RepClass:
    """Which unitary Fock representation the parameters admit.

    ``witnesses`` holds F(1) .. F(lam-1), the values the decision is based
    on.  ``dim`` is set only for the finite-dimensional kind.
    """

    kind: RepKind
    dim: int | None
    witnesses: np.ndarray

    @property
    def is_bounded_from_below(self) -> bool:
        return self.kind is RepKind.BOUNDED_FROM_BELOW


def classify(spec: AlgebraSpec) -> RepClass:
    """Classify the unitary Fock representation of a spec.

    A zero of F at some d < lam (with F positive before it) gives a
    finite-dimensional representation of dimension d; F(mu) > 0 throughout
    gives the infinite bounded-from-below one.  A negative F value before
    any zero means no unitary Fock representation of either type exists
    and raises :class:`NonUnitaryError`.
    """
    witnesses = _locked(np.array([structure_function(spec, m) for m in range(1, spec.lam)]))
    for m, value in enumerate(witnesses, start=1):
        if abs(value) <= CONSTRAINT_TOL:
            return RepClass(kind=RepKind.FINITE_DIM, dim=m, witnesses=witnesses)
        if value < 0:
            raise NonUnitaryError(
                f"F({m}) = {value!r} < 0 before any zero: no unitary Fock representation"
            )
    return RepClass(kind=RepKind.BOUNDED_FROM_BELOW, dim=None, witnesses=witnesses)


def energy_level(spec: AlgebraSpec, n: int) -> float:
    """Oscillator energy E_n = n + 1/2 + gamma_{n mod lam}.

    Within each residue class mod lam the levels are spaced exactly lam
    apart, so the spectrum splits into lam harmonic families.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return float(n + 0.5 + spec.gamma[n % spec.lam])


def energy_values(spec: AlgebraSpec, count: int, dtype=float) -> np.ndarray:
    """E_0 .. E_{count-1} as an array, computed in the requested real dtype."""
    n = np.arange(count)
    alpha = spec.alpha.astype(dtype)
    beta = _partial_sums(alpha)
    gamma = beta + alpha / 2
    return n.astype(dtype) + 0.5 + gamma[n % spec.lam]


def sample_bfb_alpha(
    lam: int,
    rng: np.random.Generator,
    low: float = -0.9,
    high: float = 2.0,
    max_tries: int = 10000,
) -> np.ndarray:
    """Draw a random alpha admitting a bounded-from-below representation.

    Components are uniform in [low, high], projected onto sum zero, and
    rejected until every F(mu), mu = 1 .. lam-1, is strictly positive.
    """
    for _ in range(max_tries):
        alpha = rng.uniform(low, high, lam)
        alpha -= alpha.mean()
        beta = _partial_sums(alpha)
        if all(m + beta[m] > CONSTRAINT_TOL for m in range(1, lam)):
            return alpha
    raise RuntimeError(f"no bounded-from-below alpha found in {max_tries} draws")
