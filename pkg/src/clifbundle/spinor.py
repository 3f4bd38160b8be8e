"""Spinor representations of Cl(p,q) via minimal left ideals.

The regular representation acts on the 2^n blade basis.  Primitive
idempotents are searched as products of commuting basis blades squaring
to +1; the left ideal they generate carries the irreducible (spinor)
representation, from which the gamma matrices are extracted by exact
linear algebra.  Everything in this module runs over Fractions so that
the defining anticommutation relations are checked as equalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .ga import (
    Metric,
    Multivector,
    Signature,
    basis_blades,
    clifford,
    grade_of_mask,
    mask_indices,
)


class ClosureError(RuntimeError):
    """A subspace expected to be invariant failed to close under the action."""


HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


# ---------------------------------------------------------------------------
# regular representation


def multivector_coords(v: Multivector) -> np.ndarray:
    """Coordinates of v in the ascending blade-mask basis (length 2^n)."""
    out = np.full(1 << v.n, Fraction(0), dtype=object)
    for mask, c in v.terms.items():
        out[mask] = Fraction(c) if not isinstance(c, float) else c
    return out


def coords_to_multivector(coords, n: int) -> Multivector:
    return Multivector(n, {m: c for m, c in enumerate(coords) if c != 0})


def regular_rep(v: Multivector, metric: Metric) -> np.ndarray:
    """Matrix of x -> v * x in the blade basis (2^n square, exact for exact input)."""
    n = v.n
    dim = 1 << n
    mat = np.full((dim, dim), Fraction(0), dtype=object)
    for col in range(dim):
        image = clifford(v, Multivector(n, {col: Fraction(1)}), metric)
        for mask, c in image.terms.items():
            mat[mask, col] = c
    return mat


# ---------------------------------------------------------------------------
# blade combinatorics used by the idempotent search


def blade_square_sign(mask: int, diag) -> int:
    """Sign s with e_mask * e_mask = s (orthogonal basis)."""
    k = grade_of_mask(mask)
    sign = -1 if (k * (k - 1) // 2) % 2 else 1
    for i in mask_indices(mask):
        sign *= 1 if diag[i - 1] > 0 else -1
    return sign


def blades_commute(ma: int, mb: int) -> bool:
    """Whether e_A and e_B commute (orthogonal basis)."""
    swaps = grade_of_mask(ma) * grade_of_mask(mb) - grade_of_mask(ma & mb)
    return swaps % 2 == 0


# ---------------------------------------------------------------------------
# primitive idempotents and minimal left ideals


@dataclass(frozen=True)
class IdempotentReport:
    """Outcome of the primitive-idempotent search for one signature."""

    signature: Signature
    idempotent: Multivector | None
    ideal_dimension: int
    factors: tuple = ()
    whole_algebra: bool = False

    @property
    def note(self) -> str:
        if self.whole_algebra:
            return "no nontrivial idempotent: the whole algebra is the minimal ideal"
        labels = ", ".join(
            f"(1 {'+' if s > 0 else '-'} e{''.join(map(str, mask_indices(m)))})/2"
            for m, s in self.factors
        )
        return f"idempotent {labels}, ideal dimension {self.ideal_dimension}"


def _ideal_dimension_of_idempotent(f: Multivector) -> int:
    # Right multiplication by an idempotent is an idempotent operator, so its
    # rank equals its trace, and only the scalar part of f contributes.
    return int(Fraction(f.coeff(0)) * (1 << f.n))


class _SearchDone(Exception):
    pass


def find_primitive_idempotent(sig: Signature) -> IdempotentReport:
    """Search products of commuting +1-square blades for a minimal-ideal generator."""
    metric = sig.metric()
    n = sig.n
    diag = sig.diag
    one = Multivector.scalar(Fraction(1), n)
    candidates = [
        m for m in range(1, 1 << n) if blade_square_sign(m, diag) == 1
    ]
    k_max = n // 2 + 1
    # every minimal ideal of Cl(p,q) has dimension >= 2^floor(n/2): the
    # algebra is M_m(D) or two copies of it with m^2 dim(D) (or twice that)
    # equal to 2^n, and the ideal carries m * dim(D) >= sqrt(2^(n-1)) reals
    dim_floor = 1 << (n // 2)

    best: tuple[int, Multivector, tuple] | None = None

    def consider(f: Multivector, factors: tuple):
        nonlocal best
        if f.is_zero() or f == one:
            return
        if clifford(f, f, metric) != f:
            return
        dim = _ideal_dimension_of_idempotent(f)
        if best is None or dim < best[0]:
            best = (dim, f, factors)
            if dim <= dim_floor:
                raise _SearchDone

    def extend(f: Multivector, factors: tuple, start: int):
        if len(factors) >= k_max:
            return
        for idx in range(start, len(candidates)):
            mask = candidates[idx]
            if not all(blades_commute(mask, m) for m, _ in factors):
                continue
            for sign in (1, -1):
                factor = (one + Multivector(n, {mask: Fraction(sign)})) * HALF
                g = clifford(f, factor, metric)
                consider(g, factors + ((mask, sign),))
                extend(g, factors + ((mask, sign),), idx + 1)

    try:
        extend(one, (), 0)
    except _SearchDone:
        pass

    if best is None:
        return IdempotentReport(sig, None, 1 << n, whole_algebra=True)
    dim, f, factors = best
    return IdempotentReport(sig, f, dim, factors=factors)


def minimal_left_ideal(f: Multivector, metric: Metric) -> list[Multivector]:
    """Ordered basis of the left ideal generated by f, by exact row reduction."""
    n = f.n
    dim = 1 << n
    rows = np.full((dim, dim), Fraction(0), dtype=object)
    for b in range(dim):
        image = clifford(Multivector(n, {b: Fraction(1)}), f, metric)
        for mask, c in image.terms.items():
            rows[b, mask] = Fraction(c)
    red, pivots = exact.rref(rows)
    return [coords_to_multivector(red[r], n) for r in range(len(pivots))]


def ideal_invariance_residual(basis: list[Multivector], metric: Metric) -> int:
    """Count of products e_mu * w that fail to re-expand in the basis (0 = invariant)."""
    if not basis:
        return 0
    n = basis[0].n
    span = np.stack([multivector_coords(w) for w in basis], axis=1)
    failures = 0
    for mu in range(n):
        e = Multivector.basis_vector(mu + 1, n, Fraction(1))
        for w in basis:
            rhs = multivector_coords(clifford(e, w, metric))
            try:
                _solve_in_span(span, rhs.reshape(-1, 1))
            except ValueError:
                failures += 1
    return failures


def _solve_in_span(span: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Exact least-structure solve of span @ x = rhs for full-column-rank span."""
    m = span.shape[1]
    aug = np.concatenate([span, rhs], axis=1)
    red, pivots = exact.rref(aug)
    if any(p >= m for p in pivots):
        raise ValueError("vector not in span")
    if len(pivots) < m:
        raise ValueError("span columns are dependent")
    return red[:m, m:]


# ---------------------------------------------------------------------------
# gamma matrices


@dataclass(frozen=True)
class GammaSet:
    """Spinor-representation matrices, one per basis vector, indices raised."""

    signature: Signature
    dim: int
    gammas: list = field(repr=False)

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def metric_diag(self) -> tuple[int, ...]:
        return self.signature.diag

    def anticommutator_residuals(self):
        """Max |{g^mu, g^nu} - 2 g^{mu nu} I| entry per pair; exact zero expected."""
        eye = exact.identity(self.dim) if self.gammas[0].dtype == object else np.eye(self.dim)
        worst = 0
        diag = self.metric_diag
        for mu in range(self.n):
            for nu in range(self.n):
                target = (2 * diag[mu] if mu == nu else 0) * eye
                acomm = self.gammas[mu] @ self.gammas[nu] + self.gammas[nu] @ self.gammas[mu]
                delta = acomm - target
                worst = max(worst, max(abs(x) for x in np.ravel(delta)))
        return worst

    def to_float(self) -> list[np.ndarray]:
        return [np.array(g, dtype=float) for g in self.gammas]


def spinor_rep_matrices(
    ideal_basis: list[Multivector], metric: Metric, signature: Signature
) -> GammaSet:
    """Restrict the regular action of the raised basis vectors to the ideal."""
    if not ideal_basis:
        raise ValueError("empty ideal basis")
    n = ideal_basis[0].n
    m = len(ideal_basis)
    span = np.stack([multivector_coords(w) for w in ideal_basis], axis=1)
    ginv = metric.inverse_gram()
    gammas = []
    for mu in range(n):
        raised = Multivector(
            n, {1 << j: Fraction(ginv[j, mu]) for j in range(n) if ginv[j, mu] != 0}
        )
        cols = []
        for w in ideal_basis:
            rhs = multivector_coords(clifford(raised, w, metric)).reshape(-1, 1)
            try:
                cols.append(_solve_in_span(span, rhs)[:, 0])
            except ValueError as exc:
                raise ClosureError(
                    f"ideal is not invariant under e^{mu + 1}: {exc}"
                ) from exc
        gammas.append(np.stack(cols, axis=1))
    return GammaSet(signature=signature, dim=m, gammas=gammas)


def gamma_set_for_signature(sig: Signature) -> GammaSet:
    """Idempotent search -> minimal ideal -> extracted gamma matrices."""
    report = find_primitive_idempotent(sig)
    metric = sig.metric()
    if report.whole_algebra:
        basis = [
            Multivector(sig.n, {m: Fraction(1)}) for m in range(1 << sig.n)
        ]
    else:
        basis = minimal_left_ideal(report.idempotent, metric)
    return spinor_rep_matrices(basis, metric, sig)


def algebra_span_dimension(gamma_set: GammaSet) -> int:
    """Dimension of the matrix span of all blade products of the gammas."""
    n = gamma_set.n
    dim = gamma_set.dim
    rows = []
    for mask in basis_blades(n):
        mat = exact.identity(dim)
        for i in mask_indices(mask):
            mat = mat @ gamma_set.gammas[i - 1]
        rows.append(np.ravel(mat))
    return exact.rank(np.stack(rows, axis=0))


def unit_character(gamma_set: GammaSet):
    """Trace of the represented unit element (= representation dimension)."""
    return sum(exact.identity(gamma_set.dim)[i, i] for i in range(gamma_set.dim))


# ---------------------------------------------------------------------------
# sigma generators and spinor derivatives


@dataclass(frozen=True)
class SigmaSet:
    """Quarter-commutators sigma^{mu nu} = [g^mu, g^nu] / 4."""

    n: int
    dim: int
    table: dict = field(repr=False)

    def mat(self, mu: int, nu: int) -> np.ndarray:
        return self.table[(mu, nu)]


def sigma_generators(gamma_set: GammaSet) -> SigmaSet:
    table = {}
    exact_mode = gamma_set.gammas[0].dtype == object
    quarter = QUARTER if exact_mode else 0.25
    for mu in range(gamma_set.n):
        for nu in range(gamma_set.n):
            g1, g2 = gamma_set.gammas[mu], gamma_set.gammas[nu]
            table[(mu, nu)] = (g1 @ g2 - g2 @ g1) * quarter
    return SigmaSet(n=gamma_set.n, dim=gamma_set.dim, table=table)


def _check_antisymmetric(coeffs, n: int, what: str):
    arr = np.asarray(coeffs)
    if arr.shape != (n, n):
        raise ValueError(f"{what} must be an {n}x{n} array, got {arr.shape}")
    for mu in range(n):
        for nu in range(n):
            a, b = arr[mu, nu], arr[nu, mu]
            bad = abs(a + b) > 1e-12 if isinstance(a, float) else a != -b
            if bad:
                raise ValueError(f"{what} must be antisymmetric: ({mu},{nu}) entry fails")
    return arr


def spinor_cov_deriv(coeffs, x_dpsi, psi, sigmas: SigmaSet):
    """Covariant derivative: x(psi) + (1/2) A_{mu nu} sigma^{mu nu} psi."""
    arr = _check_antisymmetric(coeffs, sigmas.n, "connection coefficients")
    out = np.array(x_dpsi, dtype=np.result_type(np.asarray(x_dpsi), np.asarray(psi)))
    psi = np.asarray(psi)
    for mu in range(sigmas.n):
        for nu in range(mu + 1, sigmas.n):
            if arr[mu, nu] != 0:
                out = out + arr[mu, nu] * (np.array(sigmas.mat(mu, nu), dtype=out.dtype) @ psi)
    return out


def spinor_lie_deriv(coeffs, x_dpsi, psi, sigmas: SigmaSet):
    """Spinorial Lie derivative: x(psi) - (1/2) L_{mu nu} sigma^{mu nu} psi."""
    arr = _check_antisymmetric(coeffs, sigmas.n, "Lie coefficients")
    return spinor_cov_deriv(-arr, x_dpsi, psi, sigmas)


# ---------------------------------------------------------------------------
# representation orthogonalization (group averaging)


def orthogonalize_gammas(gamma_set: GammaSet) -> list[np.ndarray]:
    """Conjugate the representation so every blade matrix becomes orthogonal.

    Averages M^T M over the finite group generated by the gammas; the
    Cholesky factor of the invariant form supplies the change of basis.
    Matrices squaring to +1 come out symmetric, squares -1 antisymmetric.
    """
    gs = [np.array(g, dtype=float) for g in gamma_set.gammas]
    dim = gamma_set.dim
    s = np.zeros((dim, dim))
    for mask in basis_blades(gamma_set.n):
        mat = np.eye(dim)
        for i in mask_indices(mask):
            mat = mat @ gs[i - 1]
        s += mat.T @ mat
    lower = np.linalg.cholesky(s)
    lt = lower.T
    lt_inv = np.linalg.inv(lt)
    out = [lt @ g @ lt_inv for g in gs]
    for g in out:
        if np.max(np.abs(g.T @ g - np.eye(dim))) > 1e-10:
            raise ClosureError("orthogonalization failed to produce orthogonal matrices")
    return out


# ---------------------------------------------------------------------------
# isomorphism table verification


@dataclass(frozen=True)
class CheckRow:
    name: str
    passed: bool
    residual: float
    relation: str
    details: str = ""


def _row(name: str, passed: bool, relation: str, details: str = "", residual: float | None = None) -> CheckRow:
    return CheckRow(
        name=name,
        passed=passed,
        residual=0.0 if residual is None and passed else (residual if residual is not None else 1.0),
        relation=relation,
        details=details,
    )


def _quaternion_checks() -> CheckRow:
    sig = Signature(0, 2)
    metric = sig.metric()
    n = 2
    one = Multivector.scalar(Fraction(1), n)
    i = Multivector.basis_vector(1, n, Fraction(1))
    j = Multivector.basis_vector(2, n, Fraction(1))
    k = clifford(i, j, metric)
    mul = lambda a, b: clifford(a, b, metric)
    ok = (
        mul(i, i) == -one
        and mul(j, j) == -one
        and mul(k, k) == -one
        and mul(i, j) == k
        and mul(j, k) == i
        and mul(k, i) == j
        and mul(i, j) == -mul(j, i)
        and mul(j, k) == -mul(k, j)
        and mul(k, i) == -mul(i, k)
        and mul(mul(i, j), k) == -one
    )
    return _row(
        "cl02-quaternion-table",
        ok,
        "i^2 = j^2 = k^2 = ijk = -1 with i=e1, j=e2, k=e1e2",
        details="Cl(0,2) reproduces the quaternion structure constants",
    )


def _matrix_algebra_check(sig: Signature, expected_ideal_dim: int) -> list[CheckRow]:
    rows = []
    name = f"cl{sig.p}{sig.q}"
    algebra_dim = 1 << sig.n
    matrix_dim = expected_ideal_dim**2
    rows.append(
        _row(
            f"{name}-dimension",
            algebra_dim == matrix_dim,
            f"2^n = (matrix side)^2 for {sig}",
            details=f"dim Cl = {algebra_dim}, dim M_{expected_ideal_dim}(R) = {matrix_dim}",
        )
    )
    report = find_primitive_idempotent(sig)
    rows.append(
        _row(
            f"{name}-minimal-ideal",
            (not report.whole_algebra) and report.ideal_dimension == expected_ideal_dim,
            f"minimal left ideal of {sig} has dimension {expected_ideal_dim}",
            details=report.note,
        )
    )
    gamma_set = gamma_set_for_signature(sig)
    residual = gamma_set.anticommutator_residuals()
    rows.append(
        _row(
            f"{name}-gamma-relations",
            residual == 0,
            "g^mu g^nu + g^nu g^mu = 2 g^{mu nu} I (exact)",
            residual=float(residual),
        )
    )
    span = algebra_span_dimension(gamma_set)
    rows.append(
        _row(
            f"{name}-full-matrix-span",
            span == matrix_dim,
            f"blade images span all of M_{expected_ideal_dim}(R)",
            details=f"span dimension {span} of {matrix_dim}",
        )
    )
    return rows


def _division_algebra_check(sig: Signature, algebra_name: str) -> list[CheckRow]:
    report = find_primitive_idempotent(sig)
    dim_ok = report.whole_algebra and report.ideal_dimension == (1 << sig.n)
    return [
        _row(
            f"cl{sig.p}{sig.q}-division-algebra",
            dim_ok,
            f"{sig} is a division algebra ({algebra_name}): minimal ideal is the whole algebra",
            details=report.note,
        )
    ]


def _even_subalgebra_checks() -> list[CheckRow]:
    sig = Signature(3, 1)
    metric = sig.metric()
    n = 4
    even_masks = [m for m in basis_blades(n) if grade_of_mask(m) % 2 == 0]
    rows = [
        _row(
            "cl31-even-dimension",
            len(even_masks) == 8,
            "even subalgebra of Cl(3,1) has dimension 2^(n-1) = 8 = dim_R M_2(C)",
            details=f"counted {len(even_masks)} even blades",
        )
    ]
    omega = Multivector(n, {0b1111: Fraction(1)})
    sq = clifford(omega, omega, metric)
    central = all(
        clifford(omega, Multivector(n, {m: Fraction(1)}), metric)
        == clifford(Multivector(n, {m: Fraction(1)}), omega, metric)
        for m in even_masks
    )
    rows.append(
        _row(
            "cl31-even-central-imaginary",
            sq == Multivector.scalar(Fraction(-1), n) and central,
            "e1234 squares to -1 and is central in the even subalgebra",
            details=f"omega^2 = {sq}",
        )
    )
    # closure of the even part under the product
    closed = all(
        grade_of_mask(mask) % 2 == 0
        for ma in even_masks
        for mb in even_masks
        for mask in clifford(
            Multivector(n, {ma: Fraction(1)}), Multivector(n, {mb: Fraction(1)}), metric
        ).terms
    )
    rows.append(
        _row(
            "cl31-even-closed",
            closed,
            "the even subalgebra is closed under the Clifford product",
        )
    )
    return rows


def verify_iso_table(signatures=None) -> list[CheckRow]:
    """Machine-check the classical low-dimensional algebra identifications."""
    rows: list[CheckRow] = []
    rows.extend(_division_algebra_check(Signature(0, 1), "C"))
    rows.append(_quaternion_checks())
    rows.extend(_division_algebra_check(Signature(0, 2), "H"))
    rows.extend(_matrix_algebra_check(Signature(1, 1), 2))
    rows.extend(_matrix_algebra_check(Signature(2, 0), 2))
    rows.extend(_matrix_algebra_check(Signature(3, 1), 4))
    rows.extend(_even_subalgebra_checks())
    if signatures:
        wanted = {(s.p, s.q) if isinstance(s, Signature) else tuple(s) for s in signatures}
        extra_rows = []
        if (1, 3) in wanted:
            report = find_primitive_idempotent(Signature(1, 3))
            extra_rows.append(
                _row(
                    "cl13-quaternionic-ideal",
                    (not report.whole_algebra) and report.ideal_dimension == 8,
                    "Cl(1,3) = H(2): minimal ideal has real dimension 8",
                    details=report.note,
                )
            )
        rows.extend(extra_rows)
    return rows
