"""Dense real tensors over a finite-dimensional vector space.

A rank-(p, q) tensor is stored as a dense row-major array with the p
contravariant axes first.  Dimensions are small (n <= 10, ranks <= 4 in
practice), so dense storage is both simple and fast.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import check_dimension


class DimensionMismatchError(ValueError):
    """Operands live over vector spaces of different dimension."""


@dataclass(frozen=True)
class Tensor:
    """A (p, q)-tensor: p contravariant slots, then q covariant slots."""

    p: int
    q: int
    n: int
    components: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_dimension(self.n)
        if self.p < 0 or self.q < 0:
            raise ValueError(f"ranks must be >= 0, got ({self.p}, {self.q})")
        comp = np.asarray(self.components, dtype=float)
        expected = (self.n,) * (self.p + self.q)
        if comp.size != self.n ** (self.p + self.q):
            raise ValueError(
                f"component count {comp.size} != n^(p+q) = {self.n ** (self.p + self.q)}"
            )
        object.__setattr__(self, "components", comp.reshape(expected))

    @property
    def rank(self) -> tuple[int, int]:
        return (self.p, self.q)

    @classmethod
    def scalar(cls, value: float, n: int) -> "Tensor":
        return cls(0, 0, n, np.array(value, dtype=float))

    @classmethod
    def zeros(cls, p: int, q: int, n: int) -> "Tensor":
        return cls(p, q, n, np.zeros((n,) * (p + q)))

    @classmethod
    def basis_vector(cls, i: int, n: int) -> "Tensor":
        """e_i as a (1,0)-tensor, 1-based index."""
        comp = np.zeros(n)
        comp[i - 1] = 1.0
        return cls(1, 0, n, comp)

    @classmethod
    def basis_covector(cls, i: int, n: int) -> "Tensor":
        """e^i (dual basis form) as a (0,1)-tensor, 1-based index."""
        comp = np.zeros(n)
        comp[i - 1] = 1.0
        return cls(0, 1, n, comp)

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_compatible(other)
        return Tensor(self.p, self.q, self.n, self.components + other.components)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_compatible(other)
        return Tensor(self.p, self.q, self.n, self.components - other.components)

    def __mul__(self, scalar: float) -> "Tensor":
        return Tensor(self.p, self.q, self.n, self.components * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor":
        return self * -1.0

    def _check_compatible(self, other: "Tensor"):
        if self.n != other.n:
            raise DimensionMismatchError(f"dimension mismatch: {self.n} vs {other.n}")
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError(f"rank mismatch: {(self.p, self.q)} vs {(other.p, other.q)}")

    def allclose(self, other: "Tensor", tol: float = 1e-12) -> bool:
        self._check_compatible(other)
        return bool(np.allclose(self.components, other.components, atol=tol, rtol=0.0))


@dataclass(frozen=True)
class LinearMap:
    """Linear map between vector spaces: matrix has shape (rows, cols)."""

    rows: int
    cols: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_dimension(self.rows)
        check_dimension(self.cols)
        mat = np.asarray(self.matrix, dtype=float)
        if mat.shape != (self.rows, self.cols):
            raise ValueError(f"matrix shape {mat.shape} != ({self.rows}, {self.cols})")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(n, n, np.eye(n))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self after other (matrix product self @ other)."""
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot compose: domain {self.cols} != codomain {other.rows}"
            )
        return LinearMap(self.rows, other.cols, self.matrix @ other.matrix)


def tensor_product(s: Tensor, t: Tensor) -> Tensor:
    """Outer product with s's indices outermost, contravariant slots first."""
    if s.n != t.n:
        raise DimensionMismatchError(f"dimension mismatch: {s.n} vs {t.n}")
    outer = np.multiply.outer(s.components, t.components)
    # outer has axes [s upper | s lower | t upper | t lower]; regroup so all
    # contravariant axes come first.
    perm = (
        list(range(s.p))
        + [s.p + s.q + k for k in range(t.p)]
        + [s.p + k for k in range(s.q)]
        + [s.p + s.q + t.p + k for k in range(t.q)]
    )
    if outer.ndim:
        outer = outer.transpose(perm)
    return Tensor(s.p + t.p, s.q + t.q, s.n, outer)


def contract(t: Tensor, r: int, s: int) -> Tensor:
    """Contract the r-th contravariant with the s-th covariant index (1-based)."""
    if t.p < 1 or t.q < 1:
        raise ValueError("contraction needs at least one index of each kind")
    if not 1 <= r <= t.p:
        raise ValueError(f"contravariant index {r} out of range 1..{t.p}")
    if not 1 <= s <= t.q:
        raise ValueError(f"covariant index {s} out of range 1..{t.q}")
    axis_up = r - 1
    axis_dn = t.p + (s - 1)
    summed = np.trace(t.components, axis1=axis_up, axis2=axis_dn)
    return Tensor(t.p - 1, t.q - 1, t.n, summed)


def permutation_parity(perm) -> int:
    """+1 for even permutations, -1 for odd (tuple of 0-based positions)."""
    inversions = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def alternate(t: Tensor) -> Tensor:
    """Antisymmetrize a purely covariant tensor: (1/q!) sum of signed permutations."""
    if t.p != 0:
        raise ValueError("alternation is defined for purely covariant tensors")
    q = t.q
    if q <= 1:
        return t
    acc = np.zeros_like(t.components)
    for perm in itertools.permutations(range(q)):
        acc += permutation_parity(perm) * t.components.transpose(perm)
    return Tensor(0, q, t.n, acc / _factorial(q))


def _factorial(q: int) -> float:
    out = 1
    for k in range(2, q + 1):
        out *= k
    return float(out)


def is_alternating(t: Tensor, tol: float = 1e-12) -> bool:
    """Check the sign-under-permutation condition for a (0, q)-tensor."""
    if t.p != 0:
        return False
    q = t.q
    for perm in itertools.permutations(range(q)):
        sign = permutation_parity(perm)
        if not np.allclose(
            t.components.transpose(perm), sign * t.components, atol=tol, rtol=0.0
        ):
            return False
    return True


def pullback(f: LinearMap, alpha: Tensor) -> Tensor:
    """Pull a covariant tensor on the codomain back along f.

    (f* alpha)[j1..jq] = sum alpha[i1..iq] f[i1,j1] ... f[iq,jq].
    """
    if alpha.p != 0:
        raise ValueError("pullback is defined for purely covariant tensors")
    if alpha.n != f.rows:
        raise DimensionMismatchError(
            f"tensor lives in dimension {alpha.n}, map codomain is {f.rows}"
        )
    comp = alpha.components
    for _ in range(alpha.q):
        # contract the leading axis with f's codomain index, result axis goes last
        comp = np.tensordot(comp, f.matrix, axes=([0], [0]))
    return Tensor(0, alpha.q, f.cols, comp)
