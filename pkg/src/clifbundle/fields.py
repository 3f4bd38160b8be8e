"""Flat-grid Dirac/Klein-Gordon operators and spin-vector constructions.

Fields are complex arrays on uniform periodic grids; spatial derivatives
are second-order central differences (np.roll), time stepping is the same
classical 4th-order scheme as the transport module.  The Minkowski gamma
sets are manufactured from the exact algebra-level representations: the
1+1 case uses the Cl(1,1) matrices directly, the 3+1 case rescales the
orthogonalized Cl(3,1) set so the metric becomes diag(+1,-1,-1,-1) with
time as index 0; the -i of the momentum operator lives in the complex
scalars, not in the (real) algebra.

Known discretization caveat: the naive central-difference Dirac operator
exhibits fermion doubling; tests and shipped scenarios use smooth
single-mode fields where the spurious branch is not excited.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import HBAR
from .ga import Signature
from .spinor import GammaSet, gamma_set_for_signature, orthogonalize_gammas


class GridError(ValueError):
    """Grid shape/periodicity does not support the requested operator."""


class StabilityError(ValueError):
    """Requested time step violates the stability bound."""


# ---------------------------------------------------------------------------
# grids and fields


@dataclass(frozen=True)
class Grid:
    """Uniform tensor-product grid; axis 0 is time on spacetime grids."""

    extents: tuple
    spacing: tuple
    periodic: tuple = None

    def __post_init__(self):
        extents = tuple(int(n) for n in self.extents)
        spacing = tuple(float(s) for s in self.spacing)
        periodic = self.periodic
        if periodic is None:
            periodic = (True,) * len(extents)
        periodic = tuple(bool(p) for p in periodic)
        if len(spacing) != len(extents) or len(periodic) != len(extents):
            raise GridError("extents, spacing and periodic must have equal length")
        if any(n < 4 for n in extents):
            raise GridError(f"each axis needs >= 4 points, got {extents}")
        if any(s <= 0 for s in spacing):
            raise GridError(f"spacing must be positive, got {spacing}")
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "periodic", periodic)

    @property
    def dims(self) -> int:
        return len(self.extents)

    @property
    def volume(self) -> int:
        return int(np.prod(self.extents))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis_coords(self, axis: int) -> np.ndarray:
        return np.arange(self.extents[axis]) * self.spacing[axis]

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*[self.axis_coords(a) for a in range(self.dims)], indexing="ij")

    def length(self, axis: int) -> float:
        return self.extents[axis] * self.spacing[axis]

    def wavenumber(self, axis: int, mode: int) -> float:
        """k compatible with periodicity: 2 pi mode / L."""
        return 2.0 * np.pi * mode / self.length(axis)

    def require_periodic(self, what: str):
        if not all(self.periodic):
            raise GridError(f"{what} requires all axes periodic, got {self.periodic}")


@dataclass(frozen=True)
class ScalarField:
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.extents:
            raise ValueError(f"values shape {vals.shape} != grid extents {self.grid.extents}")
        if not (np.all(np.isfinite(vals.real)) and np.all(np.isfinite(vals.imag))):
            raise ValueError("non-finite entries in scalar field")
        object.__setattr__(self, "values", vals)

    @classmethod
    def plane_wave(cls, grid: Grid, kvec) -> "ScalarField":
        """exp(i sum_mu k_mu x^mu) on the grid."""
        mesh = grid.mesh()
        phase = sum(k * x for k, x in zip(kvec, mesh))
        return cls(grid, np.exp(1j * phase))


@dataclass(frozen=True)
class SpinorField:
    grid: Grid
    components: np.ndarray = field(repr=False)

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=complex)
        if comp.shape[1:] != self.grid.extents:
            raise ValueError(
                f"component shape {comp.shape} does not match grid extents {self.grid.extents}"
            )
        if not (np.all(np.isfinite(comp.real)) and np.all(np.isfinite(comp.imag))):
            raise ValueError("non-finite entries in spinor field")
        object.__setattr__(self, "components", comp)

    @property
    def spinor_dim(self) -> int:
        return self.components.shape[0]

    @classmethod
    def plane_wave(cls, grid: Grid, kvec, amplitudes) -> "SpinorField":
        mesh = grid.mesh()
        phase = sum(k * x for k, x in zip(kvec, mesh))
        wave = np.exp(1j * phase)
        comp = np.stack([a * wave for a in np.asarray(amplitudes, dtype=complex)])
        return cls(grid, comp)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.components) ** 2) * self.grid.cell_volume)


@dataclass(frozen=True)
class EMPotential:
    """Real potential components A_mu over the grid volume.

    The leading axis counts spacetime components: on a spacetime grid it
    matches grid.dims, on a spatial grid it is grid.dims + 1 (A_0 first).
    """

    grid: Grid
    a: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.a, dtype=float)
        if arr.ndim != self.grid.dims + 1 or arr.shape[1:] != self.grid.extents:
            raise ValueError(
                f"potential shape {arr.shape} is not (components,) + extents {self.grid.extents}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite entries in potential")
        object.__setattr__(self, "a", arr)

    @property
    def n_components(self) -> int:
        return self.a.shape[0]

    @classmethod
    def zero(cls, grid: Grid, n_components: int | None = None) -> "EMPotential":
        ncomp = grid.dims if n_components is None else n_components
        return cls(grid, np.zeros((ncomp,) + grid.extents))


@dataclass(frozen=True)
class AffineConnection:
    """Constant connection coefficients Gamma^alpha_{mu nu}."""

    coeffs: np.ndarray = field(repr=False)
    torsion_free: bool = True

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.ndim != 3 or len(set(arr.shape)) != 1:
            raise ValueError(f"connection coefficients must be (d,d,d), got {arr.shape}")
        if self.torsion_free and np.max(np.abs(arr - arr.transpose(0, 2, 1))) > 1e-12:
            raise ValueError("torsion-free flag set but coefficients not symmetric in (mu, nu)")
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def flat(cls, dims: int) -> "AffineConnection":
        return cls(np.zeros((dims, dims, dims)))


# ---------------------------------------------------------------------------
# Minkowski gamma sets for field work


@dataclass(frozen=True)
class FieldGammaSet:
    """Gamma matrices in the field convention: eta = diag(+1, -1, ...), time first."""

    spacetime_dim: int
    eta: tuple
    gammas: list = field(repr=False)

    @property
    def spinor_dim(self) -> int:
        return self.gammas[0].shape[0]

    def gamma(self, mu: int) -> np.ndarray:
        return self.gammas[mu]

    def gamma_lower(self, mu: int) -> np.ndarray:
        return self.eta[mu] * self.gammas[mu]

    @property
    def gamma0(self) -> np.ndarray:
        return self.gammas[0]

    def anticommutator_residual(self) -> float:
        worst = 0.0
        eye = np.eye(self.spinor_dim)
        for mu in range(self.spacetime_dim):
            for nu in range(self.spacetime_dim):
                target = 2.0 * (self.eta[mu] if mu == nu else 0.0) * eye
                acomm = self.gammas[mu] @ self.gammas[nu] + self.gammas[nu] @ self.gammas[mu]
                worst = max(worst, float(np.max(np.abs(acomm - target))))
        return worst

    def hermiticity_residual(self) -> float:
        """gamma0 and gamma0 @ gamma^mu must all be Hermitian."""
        worst = 0.0
        for mu in range(self.spacetime_dim):
            m = self.gamma0 @ self.gammas[mu]
            worst = max(worst, float(np.max(np.abs(m - m.conj().T))))
        worst = max(worst, float(np.max(np.abs(self.gamma0 - self.gamma0.conj().T))))
        return worst


def minkowski_gamma_set(spacetime_dim: int) -> FieldGammaSet:
    """Field-convention gamma set built from the algebra-level representation.

    1+1: the orthogonalized Cl(1,1) matrices already realize diag(+1,-1).
    3+1: the orthogonalized Cl(3,1) matrices (metric diag(+,+,+,-)) are
    multiplied by i and reordered so the timelike direction comes first,
    which flips every square and lands on diag(+1,-1,-1,-1).
    """
    if spacetime_dim == 2:
        base = orthogonalize_gammas(gamma_set_for_signature(Signature(1, 1)))
        gammas = [base[0].astype(complex), base[1].astype(complex)]
        eta = (1, -1)
    elif spacetime_dim == 4:
        base = orthogonalize_gammas(gamma_set_for_signature(Signature(3, 1)))
        gammas = [1j * base[3]] + [1j * base[j] for j in range(3)]
        eta = (1, -1, -1, -1)
    else:
        raise ValueError(f"spacetime_dim must be 2 or 4, got {spacetime_dim}")
    out = FieldGammaSet(spacetime_dim, eta, gammas)
    if out.anticommutator_residual() > 1e-12 or out.hermiticity_residual() > 1e-12:
        raise RuntimeError("constructed gamma set failed its defining relations")
    return out


# ---------------------------------------------------------------------------
# discrete derivatives


def central_diff(arr: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    return (np.roll(arr, -1, axis=axis) - np.roll(arr, 1, axis=axis)) / (2.0 * spacing)


def second_diff(arr: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    return (np.roll(arr, -1, axis=axis) - 2.0 * arr + np.roll(arr, 1, axis=axis)) / spacing**2


def _apply_matrix(mat: np.ndarray, comp: np.ndarray) -> np.ndarray:
    """(m x m) matrix acting on the spinor axis of (m, *grid) components."""
    return np.tensordot(mat, comp, axes=(1, 0))


# ---------------------------------------------------------------------------
# Dirac operators on spacetime grids


def _check_field_gammas(psi: SpinorField, gset: FieldGammaSet):
    if psi.grid.dims != gset.spacetime_dim:
        raise GridError(
            f"grid has {psi.grid.dims} axes but gamma set is {gset.spacetime_dim}-dimensional"
        )
    if psi.spinor_dim != gset.spinor_dim:
        raise ValueError(
            f"spinor dimension {psi.spinor_dim} != gamma dimension {gset.spinor_dim}"
        )


def dirac_slash(
    psi: SpinorField, pot: EMPotential, mass: float, charge: float, gset: FieldGammaSet
) -> SpinorField:
    """(i gamma^mu (d_mu + i e A_mu) - m) psi with central differences."""
    _check_field_gammas(psi, gset)
    psi.grid.require_periodic("dirac_slash")
    if pot.grid is not psi.grid and pot.grid != psi.grid:
        raise GridError("potential and spinor live on different grids")
    if pot.n_components != psi.grid.dims:
        raise ValueError(
            f"potential has {pot.n_components} components; the spacetime grid needs {psi.grid.dims}"
        )
    out = -mass * psi.components
    for mu in range(psi.grid.dims):
        cov = central_diff(psi.components, mu + 1, psi.grid.spacing[mu])
        cov = cov + 1j * charge * pot.a[mu] * psi.components
        out = out + 1j * _apply_matrix(gset.gamma(mu), cov)
    return SpinorField(psi.grid, out)


def momentum_op(psi: SpinorField, gset: FieldGammaSet) -> SpinorField:
    """-i gamma^mu d_mu psi; Hermitian w.r.t. the Dirac pairing on periodic grids."""
    _check_field_gammas(psi, gset)
    psi.grid.require_periodic("momentum_op")
    out = np.zeros_like(psi.components)
    for mu in range(psi.grid.dims):
        dpsi = central_diff(psi.components, mu + 1, psi.grid.spacing[mu])
        out = out - 1j * _apply_matrix(gset.gamma(mu), dpsi)
    return SpinorField(psi.grid, out)


def dirac_pairing(phi: SpinorField, psi: SpinorField, gset: FieldGammaSet) -> complex:
    """<phi, psi> = sum_x phi^dag gamma0 psi * cell volume."""
    g0phi = _apply_matrix(gset.gamma0, psi.components)
    return complex(np.sum(np.conj(phi.components) * g0phi) * phi.grid.cell_volume)


def l2_inner(phi: SpinorField, psi: SpinorField) -> complex:
    return complex(np.sum(np.conj(phi.components) * psi.components) * phi.grid.cell_volume)


def momentum_expectation(psi: SpinorField, axis: int) -> float:
    """<-i d_axis> / <1> with the plain L2 product (conserved under free evolution)."""
    dpsi = central_diff(psi.components, axis + 1, psi.grid.spacing[axis])
    num = np.sum(np.conj(psi.components) * (-1j) * dpsi) * psi.grid.cell_volume
    return float(np.real(num)) / (psi.norm_sq() if psi.norm_sq() else 1.0)


# ---------------------------------------------------------------------------
# d'Alembert identity


@dataclass(frozen=True)
class DalembertResult:
    """Both sides of the second-derivative identity plus their defects."""

    lhs_matrix: np.ndarray
    lhs_scalar: np.ndarray
    rhs: np.ndarray
    scalar_residual: float
    grade2_max: float


def dalembert_identity(
    phi: ScalarField, conn: AffineConnection, gset: FieldGammaSet
) -> DalembertResult:
    """gamma^mu gamma^nu D_mu D_nu phi versus D_mu D^mu phi on the grid."""
    if not conn.torsion_free:
        raise ValueError("identity requires a torsion-free (symmetric) connection")
    grid = phi.grid
    grid.require_periodic("dalembert_identity")
    d = grid.dims
    if conn.coeffs.shape[0] != d:
        raise ValueError("connection dimension disagrees with grid")
    if gset.spacetime_dim != d:
        raise GridError("gamma set dimension disagrees with grid")
    w = [central_diff(phi.values, mu, grid.spacing[mu]) for mu in range(d)]
    c = np.empty((d, d), dtype=object)
    for mu in range(d):
        for nu in range(d):
            # compact 3-point stencil for repeated derivatives, composed
            # central differences for the mixed ones
            if mu == nu:
                second = second_diff(phi.values, mu, grid.spacing[mu])
            else:
                second = central_diff(w[nu], mu, grid.spacing[mu])
            for alpha in range(d):
                gamma_coef = conn.coeffs[alpha, mu, nu]
                if gamma_coef:
                    second = second - gamma_coef * w[alpha]
            c[mu, nu] = second
    m = gset.spinor_dim
    lhs = np.zeros(grid.extents + (m, m), dtype=complex)
    for mu in range(d):
        for nu in range(d):
            lhs += np.multiply.outer(c[mu, nu], gset.gamma(mu) @ gset.gamma(nu))
    lhs_scalar = np.trace(lhs, axis1=-2, axis2=-1) / m
    rhs = sum(gset.eta[mu] * c[mu, mu] for mu in range(d))
    eye = np.eye(m)
    grade2 = lhs - np.multiply.outer(lhs_scalar, eye)
    return DalembertResult(
        lhs_matrix=lhs,
        lhs_scalar=lhs_scalar,
        rhs=rhs,
        scalar_residual=float(np.max(np.abs(lhs_scalar - rhs))),
        grade2_max=float(np.max(np.abs(grade2))),
    )


# ---------------------------------------------------------------------------
# bundle-wrapped operators


@dataclass(frozen=True)
class WrappedGammaField:
    """Pointwise conjugated gamma matrices G^mu(x) = l_x^-1 gamma^mu l_x."""

    grid: Grid
    eta: tuple
    matrices: np.ndarray = field(repr=False)  # (d, *extents, m, m)

    def anticommutator_residual(self) -> float:
        d = len(self.eta)
        m = self.matrices.shape[-1]
        eye = np.eye(m)
        worst = 0.0
        for mu in range(d):
            for nu in range(d):
                target = 2.0 * (self.eta[mu] if mu == nu else 0.0) * eye
                acomm = (
                    self.matrices[mu] @ self.matrices[nu]
                    + self.matrices[nu] @ self.matrices[mu]
                )
                worst = max(worst, float(np.max(np.abs(acomm - target))))
        return worst


def _check_invertible_field(l_field: np.ndarray, grid: Grid):
    dets = np.linalg.det(l_field)
    bad = np.abs(dets) <= 1e-12
    if np.any(bad):
        idx = tuple(int(i) for i in np.unravel_index(int(np.argmax(bad)), bad.shape))
        raise ValueError(f"trivialization matrix singular at grid point {idx}")


def bundle_wrap(gset: FieldGammaSet, grid: Grid, l_field: np.ndarray) -> WrappedGammaField:
    """Conjugate every gamma by the pointwise trivialization matrices."""
    l_field = np.asarray(l_field, dtype=complex)
    m = gset.spinor_dim
    if l_field.shape != grid.extents + (m, m):
        raise ValueError(
            f"l field shape {l_field.shape} != extents + (m, m) = {grid.extents + (m, m)}"
        )
    _check_invertible_field(l_field, grid)
    l_inv = np.linalg.inv(l_field)
    wrapped = np.stack([l_inv @ g @ l_field for g in gset.gammas])
    return WrappedGammaField(grid=grid, eta=gset.eta, matrices=wrapped)


def _pointwise_apply(l_field: np.ndarray, comp: np.ndarray) -> np.ndarray:
    """Apply an (extents, m, m) matrix field to (m, *extents) components."""
    vol_shape = comp.shape[1:]
    m = comp.shape[0]
    flat_l = l_field.reshape(-1, m, m)
    flat_c = comp.reshape(m, -1)
    out = np.einsum("vab,bv->av", flat_l, flat_c)
    return out.reshape((m,) + vol_shape)


def wrapped_momentum(
    psi: SpinorField, l_field: np.ndarray, gset: FieldGammaSet
) -> SpinorField:
    """l^-1 o (-i gamma^mu d_mu) o l, applied pointwise on the grid."""
    l_field = np.asarray(l_field, dtype=complex)
    m = gset.spinor_dim
    if l_field.shape != psi.grid.extents + (m, m):
        raise ValueError("l field shape mismatch")
    _check_invertible_field(l_field, psi.grid)
    pushed = SpinorField(psi.grid, _pointwise_apply(l_field, psi.components))
    slashed = momentum_op(pushed, gset)
    l_inv = np.linalg.inv(l_field)
    return SpinorField(psi.grid, _pointwise_apply(l_inv, slashed.components))


def random_smooth_trivialization_field(
    grid: Grid, dim: int, seed: int = 0, strength: float = 0.25, modes: int = 2
) -> np.ndarray:
    """I + small smooth low-mode perturbation; invertible and well conditioned."""
    rng = np.random.default_rng(seed)
    mesh = grid.mesh()
    pert = np.zeros(grid.extents + (dim, dim), dtype=complex)
    for _ in range(modes):
        kvec = [grid.wavenumber(a, int(rng.integers(-2, 3))) for a in range(grid.dims)]
        phase = sum(k * x for k, x in zip(kvec, mesh))
        coef = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        pert += np.multiply.outer(np.exp(1j * phase), coef)
    peak = np.max(np.abs(pert))
    if peak > 0:
        pert *= strength / peak
    return np.broadcast_to(np.eye(dim), grid.extents + (dim, dim)).copy() + pert


# ---------------------------------------------------------------------------
# time evolution (spatial grids)


def _cfl_check(grid: Grid, dt: float):
    bound = min(grid.spacing) / 4.0
    if dt > bound:
        raise StabilityError(f"dt = {dt} exceeds the stability bound spacing/4 = {bound}")


def dirac_hamiltonian(
    psi_comp: np.ndarray, grid: Grid, pot: EMPotential, mass: float, charge: float,
    gset: FieldGammaSet,
) -> np.ndarray:
    """H_D psi = [gamma0 gamma^j (-i d_j + e A_j) + m gamma0 + e A_0] psi.

    Obtained from the covariant equation by multiplying with gamma0 and
    isolating i d_t; spatial axis j of the grid carries spacetime index j+1.
    """
    out = charge * pot.a[0] * psi_comp
    g0 = gset.gamma0
    out = out + mass * _apply_matrix(g0, psi_comp)
    for j in range(grid.dims):
        dj = central_diff(psi_comp, j + 1, grid.spacing[j])
        term = -1j * dj + charge * pot.a[j + 1] * psi_comp
        out = out + _apply_matrix(g0 @ gset.gamma(j + 1), term)
    return out


def dirac_hamiltonian_evolve(
    psi0: SpinorField,
    pot: EMPotential | None,
    mass: float,
    charge: float,
    t: float,
    dt: float,
    gset: FieldGammaSet,
) -> SpinorField:
    """Integrate i d_t psi = H_D psi on a spatial grid up to time t."""
    grid = psi0.grid
    grid.require_periodic("dirac_hamiltonian_evolve")
    if grid.dims != gset.spacetime_dim - 1:
        raise GridError(
            f"spatial grid has {grid.dims} axes; gamma set expects {gset.spacetime_dim - 1}"
        )
    _cfl_check(grid, dt)
    pot_a = np.zeros((gset.spacetime_dim,) + grid.extents)
    if pot is not None:
        if pot.n_components != gset.spacetime_dim:
            raise ValueError(
                f"potential must supply {gset.spacetime_dim} spacetime components "
                f"(A_0 first) over the spatial grid, got {pot.n_components}"
            )
        pot_a[:] = pot.a
    pot_full = EMPotential(grid, pot_a)

    def rhs(comp):
        return (-1j / HBAR) * dirac_hamiltonian(comp, grid, pot_full, mass, charge, gset)

    comp = psi0.components.copy()
    steps = max(1, int(round(t / dt)))
    step = t / steps
    for _ in range(steps):
        k1 = rhs(comp)
        k2 = rhs(comp + step / 2 * k1)
        k3 = rhs(comp + step / 2 * k2)
        k4 = rhs(comp + step * k3)
        comp = comp + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return SpinorField(grid, comp)


# ---------------------------------------------------------------------------
# Klein-Gordon via the two-component reduction


def klein_gordon_reduce(phi: ScalarField, phidot: ScalarField, mass: float) -> SpinorField:
    """psi = (phi + (i/m) dphi/dt, phi - (i/m) dphi/dt)."""
    if mass <= 0:
        raise ValueError("the two-component reduction divides by the mass; need m > 0")
    up = phi.values + (1j / mass) * phidot.values
    dn = phi.values - (1j / mass) * phidot.values
    return SpinorField(phi.grid, np.stack([up, dn]))


def klein_gordon_reconstruct(psi: SpinorField) -> tuple[ScalarField, ScalarField]:
    """Inverse of the reduction: phi = (psi1 + psi2)/2.

    The second return is (psi1 - psi2)/2 = (i/m) dphi/dt, kept in that
    mass-free form so the round trip needs no mass argument.
    """
    phi = ScalarField(psi.grid, (psi.components[0] + psi.components[1]) / 2.0)
    half_diff = ScalarField(psi.grid, (psi.components[0] - psi.components[1]) / 2.0)
    return phi, half_diff


def klein_gordon_hamiltonian(comp: np.ndarray, grid: Grid, mass: float) -> np.ndarray:
    """First-order (two-component) Hamiltonian equivalent to the KG equation.

    H = sigma3 m + (sigma3 + i sigma2) (-laplacian) / (2m); i d_t psi = H psi
    reproduces d^2 phi/dt^2 = (laplacian - m^2) phi for the reduced doublet.
    """
    lap = np.zeros_like(comp)
    for j in range(grid.dims):
        lap = lap + second_diff(comp, j + 1, grid.spacing[j])
    w = -lap / (2.0 * mass)
    up, dn = comp[0], comp[1]
    h_up = mass * up + w[0] + w[1]
    h_dn = -mass * dn - w[0] - w[1]
    return np.stack([h_up, h_dn])


def klein_gordon_evolve(psi0: SpinorField, mass: float, t: float, dt: float) -> SpinorField:
    """March the reduced doublet with the 4th-order one-step scheme."""
    if mass <= 0:
        raise ValueError("need m > 0")
    grid = psi0.grid
    grid.require_periodic("klein_gordon_evolve")
    _cfl_check(grid, dt)

    def rhs(comp):
        return (-1j / HBAR) * klein_gordon_hamiltonian(comp, grid, mass)

    comp = psi0.components.copy()
    steps = max(1, int(round(t / dt)))
    step = t / steps
    for _ in range(steps):
        k1 = rhs(comp)
        k2 = rhs(comp + step / 2 * k1)
        k3 = rhs(comp + step / 2 * k2)
        k4 = rhs(comp + step * k3)
        comp = comp + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return SpinorField(grid, comp)


# ---------------------------------------------------------------------------
# stress tensor and spin-vector packaging


def stress_tensor(phi_value, dphi, mass, eta=(1, -1, -1, -1)) -> np.ndarray:
    """T^{mu nu} = d^mu phi d^nu phi - eta^{mu nu} L for the free scalar Lagrangian.

    Pointwise; exact if inputs are Fractions.  L = (d^mu phi d_mu phi - m^2 phi^2)/2.
    """
    d = len(dphi)
    eta = tuple(eta[:d])
    upper = [eta[mu] * dphi[mu] for mu in range(d)]
    quad = sum(upper[mu] * dphi[mu] for mu in range(d))
    half = Fraction(1, 2) if not any(isinstance(x, (float, complex)) for x in list(dphi) + [phi_value, mass]) else 0.5
    lag = half * (quad - mass * mass * phi_value * phi_value)
    out = np.empty((d, d), dtype=object)
    for mu in range(d):
        for nu in range(d):
            out[mu, nu] = upper[mu] * upper[nu] - (eta[mu] if mu == nu else 0) * lag
    if any(isinstance(x, (float, complex)) for x in out.ravel()):
        return out.astype(float)
    return out


def stress_energy_spinvector(t_upper, gammas_lower) -> np.ndarray:
    """Sum T^{mu nu} gamma_mu gamma_nu; collapses to trace(T^mu_nu) * I for symmetric T."""
    t_upper = np.asarray(t_upper)
    d = t_upper.shape[0]
    if len(gammas_lower) != d:
        raise ValueError("need one lowered gamma per index")
    out = None
    for mu in range(d):
        for nu in range(d):
            term = t_upper[mu, nu] * (gammas_lower[mu] @ gammas_lower[nu])
            out = term if out is None else out + term
    return out


def lowered_gammas_exact(gamma_set: GammaSet) -> list:
    """gamma_mu = g_{mu mu} gamma^mu for the exact diagonal-metric sets."""
    return [
        gamma_set.gammas[mu] * Fraction(gamma_set.metric_diag[mu])
        for mu in range(gamma_set.n)
    ]


def lowered_gammas_field(gset: FieldGammaSet) -> list:
    return [gset.gamma_lower(mu) for mu in range(gset.spacetime_dim)]


@dataclass(frozen=True)
class SpinVector:
    """Clifford-valued packaging of conserved scalars: (H gamma0, P_j gamma^j)."""

    e_part: np.ndarray
    p_part: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.e_part + self.p_part


def spin_vector_package(energy: float, momentum, gset: FieldGammaSet) -> SpinVector:
    e_part = energy * gset.gamma0
    p_part = np.zeros_like(gset.gamma0)
    for j, pj in enumerate(momentum):
        p_part = p_part + pj * gset.gamma(j + 1)
    return SpinVector(e_part=e_part, p_part=p_part)


def field_energy_momentum(
    phi: ScalarField, phidot: ScalarField, mass: float
) -> tuple[float, list[float]]:
    """Classical lattice integrals H = sum T^00 dV, P_j = sum T^0_j dV.

    Stand-ins for the conserved scalars packaged by spin_vector_package.
    """
    grid = phi.grid
    vals = np.real(phi.values)
    dots = np.real(phidot.values)
    grads = [np.real(central_diff(phi.values, a, grid.spacing[a])) for a in range(grid.dims)]
    grad_sq = sum(g * g for g in grads)
    t00 = 0.5 * (dots**2 + grad_sq + mass**2 * vals**2)
    energy = float(np.sum(t00) * grid.cell_volume)
    momenta = [float(np.sum(dots * g) * grid.cell_volume) for g in grads]
    return energy, momenta
