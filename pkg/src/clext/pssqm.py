"""Parasupersymmetry of order p on the cyclic algebra of order lam = p + 1.

The parasupercharge couples the raising operator to every grading sector
except a distinguished one:

    Q = sum_{nu=1..p} eta_{mu+nu} adag P_{mu+nu},

so Q annihilates sector mu and raises every other sector by one.  Order-p
parasupersymmetry requires

    Q^{p+1} = 0 with Q^n != 0 for n <= p,
    [H, Q] = 0,
    Q^p Qd + Q^{p-1} Qd Q + ... + Qd Q^p = 2p Q^{p-1} H,

with H the oscillator Hamiltonian shifted per sector.  Commutation with Q
fixes the shift differences through the recursion

    r_{mu+nu} = 2 + alpha_{mu+nu} + alpha_{mu+nu+1} + r_{mu+nu+1},  nu = 1..p,

and the multilinear relation holds on every Fock state iff the coefficient
norms satisfy sum |eta|^2 = 2p together with one linear condition that
pins r_{mu+2} (and with it the whole chain).  :func:`solve_r` implements
that chain; :func:`khare_check` measures the relation residuals on the
truncation interior.

The order-2 double-commutator variant ([Q, [Qd, Q]] = 2QH with Q^3 = 0) is
compatible with the same shifted Hamiltonian only where alpha_{mu+2} = -1;
:func:`beckers_debergh_check` and :func:`bd_scan` probe that obstruction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraSpec,
    _partial_sums,
    classify,
    energy_level,
    from_alpha,
    sample_bfb_alpha,
    structure_values,
)
from .errors import (
    EtaNormViolationError,
    NotBoundedFromBelowError,
    OrderMismatchError,
    WrongLambdaError,
    WrongOrderError,
)
from .fock import TruncatedFockRep, build_fock_rep
from .spectrum import degeneracy_profile, shifted_hamiltonian
from .verify import interior_max_abs

DEFAULT_PSSQM_TOL = 1e-10
DEFAULT_SSQM_TOL = 1e-13
DEFAULT_CLUSTER_TOL = 1e-8
CONSTRAINT_TOL = 1e-12

#: Matrix precision for relation checks.  Words of length p+1 at the
#: default truncation reach entry magnitudes around 1e5, where plain double
#: quantization of the square roots alone costs ~1e-10 absolute residual;
#: extended precision keeps the checks well inside their tolerance.
CHECK_DTYPE = np.clongdouble


def default_eta(p: int, mu: int = 0) -> np.ndarray:
    """Supercharge coefficients with |eta|^2 = 2 in every sector.

    Entry k couples sector mu + 1 + k (mod p+1); the norm condition
    sum |eta|^2 = 2p holds exactly.  ``mu`` only fixes that labeling, the
    values do not depend on it.
    """
    if p < 1:
        raise ValueError(f"order must be >= 1, got {p}")
    return np.full(p, math.sqrt(2.0), dtype=complex)


def _normalized_eta(lam: int, eta) -> np.ndarray:
    p = lam - 1
    if eta is None:
        return default_eta(p)
    eta = np.asarray(eta, dtype=complex)
    if eta.shape != (p,):
        raise OrderMismatchError(
            f"eta must have p = lam - 1 = {p} entries, got {eta.shape}"
        )
    if np.any(np.abs(eta) == 0):
        raise ValueError("eta entries must be nonzero")
    return eta


def solve_r(spec: AlgebraSpec, mu: int, eta=None) -> np.ndarray:
    """Sector shifts making the shifted Hamiltonian parasupersymmetric.

    The multilinear relation fixes

        r_{mu+2} = (1/p) sum_{nu=1..p-1} |eta_{mu+nu+1}|^2
                   (nu + sum_{rho=0..nu-1} alpha_{mu+rho+2}) - 1 - alpha_{mu+2},

    after which the commutation recursion propagates one step down to
    r_{mu+1} and up through r_{mu+3} .. r_{mu+p}, closing the cycle at
    r_mu.  Only |eta|^2 enters, so coefficient phases never matter.

    Returns the shifts indexed by absolute sector 0 .. lam-1.  Requires a
    bounded-from-below spec, eta of length p = lam - 1, and the norm
    condition sum |eta|^2 = 2p.
    """
    lam = spec.lam
    p = lam - 1
    if not 0 <= mu <= p:
        raise ValueError(f"mu must lie in 0..{p}, got {mu}")
    eta = _normalized_eta(lam, eta)
    norms = np.abs(eta) ** 2
    total = float(norms.sum())
    if abs(total - 2 * p) > CONSTRAINT_TOL:
        raise EtaNormViolationError(f"sum |eta|^2 must equal 2p = {2 * p}, got {total!r}")
    if not classify(spec).is_bounded_from_below:
        raise NotBoundedFromBelowError(
            "sector shifts are defined on the bounded-from-below representation only"
        )

    alpha = spec.alpha
    # norms[nu - 1] is |eta_{mu+nu}|^2 for nu = 1..p
    pinned = 0.0
    for nu in range(1, p):
        pinned += norms[nu] * (nu + sum(alpha[(mu + rho + 2) % lam] for rho in range(nu)))
    pinned = pinned / p - 1.0 - alpha[(mu + 2) % lam]

    shifts = {(mu + 2) % lam: pinned}
    shifts[(mu + 1) % lam] = 2.0 + alpha[(mu + 1) % lam] + alpha[(mu + 2) % lam] + pinned
    current = pinned
    for nu in range(2, p + 1):
        current = current - 2.0 - alpha[(mu + nu) % lam] - alpha[(mu + nu + 1) % lam]
        shifts[(mu + nu + 1) % lam] = current
    return np.array([shifts[sector] for sector in range(lam)])


@dataclass(frozen=True, eq=False)
class PssqmConfig:
    """A solved parasupersymmetric configuration: spec, sector, eta, shifts."""

    spec: AlgebraSpec
    mu: int
    eta: np.ndarray
    r: np.ndarray

    @property
    def p(self) -> int:
        return self.spec.lam - 1

    def __post_init__(self):
        lam = self.spec.lam
        object.__setattr__(self, "eta", _normalized_eta(lam, self.eta))
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        if self.r.shape != (lam,):
            raise OrderMismatchError(f"r must have {lam} entries, got {self.r.shape}")
        total = float((np.abs(self.eta) ** 2).sum())
        if abs(total - 2 * self.p) > CONSTRAINT_TOL:
            raise EtaNormViolationError(
                f"sum |eta|^2 must equal 2p = {2 * self.p}, got {total!r}"
            )
        worst = max(
            abs(
                self.r[(self.mu + nu) % lam]
                - (
                    2.0
                    + self.spec.alpha[(self.mu + nu) % lam]
                    + self.spec.alpha[(self.mu + nu + 1) % lam]
                    + self.r[(self.mu + nu + 1) % lam]
                )
            )
            for nu in range(1, self.p + 1)
        )
        if worst > CONSTRAINT_TOL:
            raise ValueError(f"sector shifts break the commutation recursion by {worst:.3e}")


def solve_config(spec: AlgebraSpec, mu: int, eta=None) -> PssqmConfig:
    """Solve the shift chain and return the validated configuration."""
    eta = _normalized_eta(spec.lam, eta)
    return PssqmConfig(spec=spec, mu=mu, eta=eta, r=solve_r(spec, mu, eta))


def build_supercharge(rep: TruncatedFockRep, mu: int, eta=None) -> np.ndarray:
    """Parasupercharge Q = sum_nu eta_{mu+nu} adag P_{mu+nu}.

    Annihilates grading sector mu and raises every other sector by one.
    """
    lam = rep.spec.lam
    if not 0 <= mu < lam:
        raise ValueError(f"mu must lie in 0..{lam - 1}, got {mu}")
    eta = _normalized_eta(lam, eta)
    charge = np.zeros_like(rep.a)
    for nu in range(1, lam):
        charge = charge + eta[nu - 1] * (rep.adag @ rep.P[(mu + nu) % lam])
    return charge


@dataclass(frozen=True)
class PssqmReport:
    """Interior residuals of the order-p relations plus spectrum data."""

    order: int
    residual_nilpotency: float
    nonvanishing_witness: float
    residual_commutator: float
    residual_multilinear: float
    breaking: str
    ground_energy: float
    ground_multiplicity: int
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "residual_nilpotency": self.residual_nilpotency,
            "nonvanishing_witness": self.nonvanishing_witness,
            "residual_commutator": self.residual_commutator,
            "residual_multilinear": self.residual_multilinear,
            "breaking": self.breaking,
            "ground_energy": self.ground_energy,
            "ground_multiplicity": self.ground_multiplicity,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def khare_check(
    rep: TruncatedFockRep,
    charge: np.ndarray,
    hamiltonian: np.ndarray,
    tol: float = DEFAULT_PSSQM_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> PssqmReport:
    """Residuals of the order-p relations for given Q and diagonal H.

    Checks Q^{p+1} = 0, [H, Q] = 0, and the multilinear relation, all
    masked with interior margin p + 1, plus the nonvanishing of Q^n for
    n <= p (reported as the smallest unmasked max-entry, which must stay
    positive).  The
    breaking classification is read off the spectrum of H: a nondegenerate
    ground cluster means unbroken.  Needs dim > lam (p + 1) so that at
    least one complete multiplet survives the cluster cutoff.
    """
    p = rep.spec.lam - 1
    lam = rep.spec.lam
    margin = p + 1

    powers = [np.eye(rep.dim, dtype=charge.dtype)]
    for _ in range(p + 1):
        powers.append(powers[-1] @ charge)
    nilpotency = interior_max_abs(powers[p + 1], margin)
    # nonvanishing needs no interior mask: every entry of Q^n is a true
    # matrix element (truncation only removes paths, never adds them)
    witness = min(float(np.max(np.abs(powers[n]))) for n in range(1, p + 1))
    commutator = interior_max_abs(hamiltonian @ charge - charge @ hamiltonian, margin)

    adjoint = charge.conj().T
    lhs = sum(powers[p - k] @ adjoint @ powers[k] for k in range(p + 1))
    rhs = (2 * p) * (powers[p - 1] @ hamiltonian)
    multilinear = interior_max_abs(lhs - rhs, margin)

    diagonal = np.real(np.diag(hamiltonian)).astype(float)
    clusters = degeneracy_profile(diagonal, cluster_tol, drop_top=lam * (p + 1))
    if not clusters:
        raise ValueError("no clusters survive the truncation cutoff; increase dim")
    ground = clusters[0]
    return PssqmReport(
        order=p,
        residual_nilpotency=nilpotency,
        nonvanishing_witness=witness,
        residual_commutator=commutator,
        residual_multilinear=multilinear,
        breaking="unbroken" if ground.multiplicity == 1 else "broken",
        ground_energy=ground.energy,
        ground_multiplicity=ground.multiplicity,
        tolerance=tol,
        passed=(
            nilpotency <= tol and commutator <= tol and multilinear <= tol and witness > 0
        ),
    )


@dataclass(frozen=True)
class BreakingReport:
    """Ground and excited degeneracy structure versus the sector prediction.

    The prediction (ground multiplicity mu + 1, unbroken exactly for
    mu = 0, excited multiplets of p + 1) is compared against the clustered
    spectrum, never assumed.
    """

    breaking: str
    ground_energy: float
    ground_multiplicity: int
    excited_multiplicities: tuple[int, ...]
    predicted_ground_multiplicity: int
    matches_prediction: bool

    def to_dict(self) -> dict:
        return {
            "breaking": self.breaking,
            "ground_energy": self.ground_energy,
            "ground_multiplicity": self.ground_multiplicity,
            "excited_multiplicities": list(self.excited_multiplicities),
            "predicted_ground_multiplicity": self.predicted_ground_multiplicity,
            "matches_prediction": self.matches_prediction,
        }


def classify_breaking(
    h_diagonal, mu: int, p: int, cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> BreakingReport:
    """Classify breaking from the diagonal of a solved shifted Hamiltonian.

    Clusters the spectrum with the top lam (p + 1) states excluded (their
    multiplets lose members to truncation) and reads the ground multiplicity
    from the lowest surviving cluster.
    """
    lam = p + 1
    clusters = degeneracy_profile(np.asarray(h_diagonal, dtype=float), cluster_tol,
                                  drop_top=lam * (p + 1))
    if not clusters:
        raise ValueError("no clusters survive the truncation cutoff; increase dim")
    ground = clusters[0]
    excited = tuple(c.multiplicity for c in clusters[1:])
    breaking = "unbroken" if ground.multiplicity == 1 else "broken"
    matches = (
        ground.multiplicity == mu + 1
        and breaking == ("unbroken" if mu == 0 else "broken")
        and all(m == p + 1 for m in excited)
    )
    return BreakingReport(
        breaking=breaking,
        ground_energy=ground.energy,
        ground_multiplicity=ground.multiplicity,
        excited_multiplicities=excited,
        predicted_ground_multiplicity=mu + 1,
        matches_prediction=matches,
    )


@dataclass(frozen=True)
class KhareRun:
    """Bundle of one solved-and-checked parasupersymmetric configuration."""

    report: PssqmReport
    breaking: BreakingReport
    solved_r: np.ndarray
    used_r: np.ndarray
    eta: np.ndarray


def solve_and_check(
    spec: AlgebraSpec,
    mu: int,
    dim: int | None = None,
    eta=None,
    r=None,
    tol: float = DEFAULT_PSSQM_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    dtype=CHECK_DTYPE,
) -> KhareRun:
    """Solve the shift chain, build Q and H, and run the full check.

    ``r`` overrides the solved shifts (useful as a negative control);
    ``dim`` defaults to 10 lam.
    """
    lam = spec.lam
    eta = _normalized_eta(lam, eta)
    solved = solve_r(spec, mu, eta)
    used = solved if r is None else np.asarray(r, dtype=float)
    if dim is None:
        dim = 10 * lam
    rep = build_fock_rep(spec, dim, dtype=dtype)
    charge = build_supercharge(rep, mu, eta)
    hamiltonian = shifted_hamiltonian(rep, used)
    report = khare_check(rep, charge, hamiltonian, tol=tol, cluster_tol=cluster_tol)
    breaking = classify_breaking(
        np.real(np.diag(hamiltonian)).astype(float), mu, lam - 1, cluster_tol
    )
    return KhareRun(report=report, breaking=breaking, solved_r=solved, used_r=used, eta=eta)


def ground_energy(spec: AlgebraSpec, mu: int, eta=None) -> float:
    """Closed-form ground energy of the solved shifted Hamiltonian.

    The minimum over sector bottom states of E_nu + r_nu / 2; affine in
    alpha for fixed coefficient norms.
    """
    shifts = solve_r(spec, mu, eta)
    return min(energy_level(spec, nu) + shifts[nu] / 2 for nu in range(spec.lam))


def sample_ground_energies(
    lam: int,
    mu: int,
    count: int = 100,
    rng: np.random.Generator | None = None,
    low: float = -0.9,
    high: float = 2.0,
):
    """Ground energies of ``count`` random bounded-from-below draws."""
    if rng is None:
        rng = np.random.default_rng(42)
    alphas = [sample_bfb_alpha(lam, rng, low, high) for _ in range(count)]
    energies = np.array([ground_energy(from_alpha(lam, a), mu) for a in alphas])
    return alphas, energies


def find_null_ground_alpha(
    lam: int,
    mu: int,
    rng: np.random.Generator,
    low: float = -0.9,
    high: float = 2.0,
    energy_tol: float = 1e-9,
    max_tries: int = 500,
) -> np.ndarray:
    """Construct an alpha whose solved ground energy vanishes.

    Samples one positive-energy and one negative-energy draw and
    interpolates: the ground energy is affine in alpha and the admissible
    region is convex, so the root of the line search is itself admissible.
    """
    for _ in range(max_tries):
        positive = negative = None
        for _ in range(max_tries):
            alpha = sample_bfb_alpha(lam, rng, low, high)
            energy = ground_energy(from_alpha(lam, alpha), mu)
            if energy > 1e-6 and positive is None:
                positive = (alpha, energy)
            elif energy < -1e-6 and negative is None:
                negative = (alpha, energy)
            if positive and negative:
                break
        if not (positive and negative):
            continue
        weight = positive[1] / (positive[1] - negative[1])
        candidate = (1 - weight) * positive[0] + weight * negative[0]
        candidate -= candidate.mean()  # restore exact sum zero after rounding
        beta = _partial_sums(candidate)
        if not all(m + beta[m] > CONSTRAINT_TOL for m in range(1, lam)):
            continue
        if abs(ground_energy(from_alpha(lam, candidate), mu)) <= energy_tol:
            return candidate
    raise RuntimeError("no null-ground alpha found; widen the sampling box")


@dataclass(frozen=True)
class SsqmReport:
    """Residuals and spectrum of one lam = 2 supersymmetry variant."""

    variant: str
    residual_nilpotency: float
    residual_anticommutator: float
    residual_commutator: float
    ground_energy: float
    ground_multiplicity: int
    excited_multiplicities: tuple[int, ...]
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "residual_nilpotency": self.residual_nilpotency,
            "residual_anticommutator": self.residual_anticommutator,
            "residual_commutator": self.residual_commutator,
            "ground_energy": self.ground_energy,
            "ground_multiplicity": self.ground_multiplicity,
            "excited_multiplicities": list(self.excited_multiplicities),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def ssqm_check(
    rep: TruncatedFockRep,
    variant: str,
    tol: float = DEFAULT_SSQM_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> SsqmReport:
    """Check one of the two lam = 2 supersymmetry realizations.

    unbroken: Q = adag P_1, H = adag a P_0 + a adag P_1 (nondegenerate
    ground state, doubly degenerate excited states); broken: Q = adag P_0,
    H = a adag P_0 + adag a P_1 (every level doubly degenerate).  Residuals
    of Q^2, {Qd, Q} - H, and [H, Q] are taken on interior margin 2; the
    degeneracy profile uses the exact diagonal of H, since the product form
    zeroes the top state.
    """
    if rep.spec.lam != 2:
        raise WrongLambdaError(f"supersymmetry check needs lam = 2, got {rep.spec.lam}")
    if variant not in ("unbroken", "broken"):
        raise ValueError(f"variant must be 'unbroken' or 'broken', got {variant!r}")
    margin = 2
    lower_upper = rep.adag @ rep.a
    upper_lower = rep.a @ rep.adag
    if variant == "unbroken":
        charge = rep.adag @ rep.P[1]
        hamiltonian = lower_upper @ rep.P[0] + upper_lower @ rep.P[1]
    else:
        charge = rep.adag @ rep.P[0]
        hamiltonian = upper_lower @ rep.P[0] + lower_upper @ rep.P[1]
    adjoint = charge.conj().T
    nilpotency = interior_max_abs(charge @ charge, margin)
    anticommutator = interior_max_abs(adjoint @ charge + charge @ adjoint - hamiltonian, margin)
    commutator = interior_max_abs(hamiltonian @ charge - charge @ hamiltonian, margin)

    values = structure_values(rep.spec, rep.dim + 1)
    n = np.arange(rep.dim)
    if variant == "unbroken":
        diagonal = np.where(n % 2 == 0, values[n], values[n + 1])
    else:
        diagonal = np.where(n % 2 == 0, values[n + 1], values[n])
    clusters = degeneracy_profile(diagonal, cluster_tol, drop_top=4)
    if not clusters:
        raise ValueError("no clusters survive the truncation cutoff; increase dim")
    ground = clusters[0]
    return SsqmReport(
        variant=variant,
        residual_nilpotency=nilpotency,
        residual_anticommutator=anticommutator,
        residual_commutator=commutator,
        ground_energy=ground.energy,
        ground_multiplicity=ground.multiplicity,
        excited_multiplicities=tuple(c.multiplicity for c in clusters[1:]),
        tolerance=tol,
        passed=(nilpotency <= tol and anticommutator <= tol and commutator <= tol),
    )


@dataclass(frozen=True)
class BdReport:
    """Residual of the double-commutator variant for one configuration."""

    residual: float
    bd_compatible: bool
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "bd_compatible": self.bd_compatible,
            "tolerance": self.tolerance,
        }


def beckers_debergh_check(
    rep: TruncatedFockRep,
    mu: int,
    eta=None,
    r=None,
    tol: float = DEFAULT_PSSQM_TOL,
) -> BdReport:
    """Residual of [Q, [Qd, Q]] = 2 Q H at order p = 2.

    Uses the same charge and solved shifted Hamiltonian as the order-2
    check (``r`` defaults to the solved chain); interior margin 3.  The
    relation holds only where alpha_{mu+2} = -1.
    """
    if rep.spec.lam != 3:
        raise WrongOrderError(
            f"double-commutator variant is order 2 only (lam = 3), got lam = {rep.spec.lam}"
        )
    eta = _normalized_eta(rep.spec.lam, eta)
    shifts = solve_r(rep.spec, mu, eta) if r is None else np.asarray(r, dtype=float)
    charge = build_supercharge(rep, mu, eta)
    hamiltonian = shifted_hamiltonian(rep, shifts)
    adjoint = charge.conj().T
    inner = adjoint @ charge - charge @ adjoint
    residual = interior_max_abs(
        charge @ inner - inner @ charge - 2.0 * (charge @ hamiltonian), 3
    )
    return BdReport(residual=residual, bd_compatible=residual <= tol, tolerance=tol)


@dataclass(frozen=True)
class BdScanPoint:
    parameter: float
    residual: float | None
    bfb: bool

    def to_dict(self) -> dict:
        return {"parameter": self.parameter, "residual": self.residual, "bfb": self.bfb}


def bd_scan(
    base_alpha,
    mu: int,
    start: float,
    stop: float,
    points: int,
    dim: int | None = None,
    eta=None,
    tol: float = DEFAULT_PSSQM_TOL,
    dtype=CHECK_DTYPE,
) -> list[BdScanPoint]:
    """Scan alpha_{mu+2} and record the double-commutator residual.

    At each grid value t the scanned component is set to t and the other
    two components of ``base_alpha`` are shifted by a common constant to
    keep the zero sum.  Points without a bounded-from-below representation
    carry residual None.
    """
    base_alpha = np.asarray(base_alpha, dtype=float)
    if base_alpha.shape != (3,):
        raise WrongOrderError(f"scan needs a 3-component alpha, got {base_alpha.shape}")
    if points < 1:
        raise ValueError(f"points must be >= 1, got {points}")
    index = (mu + 2) % 3
    others = [i for i in range(3) if i != index]
    if dim is None:
        dim = 36
    results = []
    for t in np.linspace(start, stop, points):
        alpha = base_alpha.copy()
        shift = (base_alpha[index] - t) / 2
        alpha[index] = t
        alpha[others] += shift
        beta = _partial_sums(alpha)
        if not all(m + beta[m] > CONSTRAINT_TOL for m in range(1, 3)):
            results.append(BdScanPoint(parameter=float(t), residual=None, bfb=False))
            continue
        spec = from_alpha(3, alpha)
        rep = build_fock_rep(spec, dim, dtype=dtype)
        report = beckers_debergh_check(rep, mu, eta=eta, tol=tol)
        results.append(BdScanPoint(parameter=float(t), residual=report.residual, bfb=True))
    return results
