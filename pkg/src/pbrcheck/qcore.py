"""Minimal complex linear algebra for small state vectors.

Conventions fixed here and relied on everywhere else:

* Tensor products are row-major with the first factor slowest, i.e.
  ``tensor(a, b)`` places the amplitude of ``a[j] * b[k]`` at index
  ``j * b.dim + k`` (the ``numpy.kron`` ordering).
* Inner products are conjugate-linear in the first argument.
* The tolerance for "this quantity is exactly zero in the algebra" is
  ``ATOL = 1e-12``; double-precision construction of every state used
  here keeps true zeros below 1e-15.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOL = 1e-12


def _as_complex_vector(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d amplitude sequence, got shape {arr.shape}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValueError("amplitudes must be finite")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitude vector over a computational basis of known dimension."""

    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _as_complex_vector(self.amps))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, atol: float = ATOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= atol

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amps / n)

    def __add__(self, other: "StateVector") -> "StateVector":
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return StateVector(self.amps + other.amps)

    def __sub__(self, other: "StateVector") -> "StateVector":
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return StateVector(self.amps - other.amps)

    def __mul__(self, scalar) -> "StateVector":
        return StateVector(self.amps * complex(scalar))

    __rmul__ = __mul__

    def allclose(self, other: "StateVector", atol: float = ATOL) -> bool:
        return self.dim == other.dim and bool(
            np.allclose(self.amps, other.amps, rtol=0.0, atol=atol)
        )

    def __repr__(self) -> str:
        return f"StateVector({np.array2string(self.amps, precision=6)})"


@dataclass(frozen=True, eq=False)
class Basis:
    """A labelled set of pairwise-orthonormal vectors of one dimension."""

    vectors: tuple[StateVector, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.vectors) != len(self.labels):
            raise ValueError("one label per basis vector required")
        if not self.vectors:
            raise ValueError("basis must contain at least one vector")
        dim = self.vectors[0].dim
        if any(v.dim != dim for v in self.vectors):
            raise ValueError("all basis vectors must share one dimension")
        if len(self.vectors) > dim:
            raise ValueError(f"{len(self.vectors)} vectors cannot be orthonormal in dim {dim}")
        gram = self.gram()
        if not np.allclose(gram, np.eye(len(self.vectors)), rtol=0.0, atol=ATOL):
            raise ValueError("basis vectors are not orthonormal within 1e-12")

    @property
    def dim(self) -> int:
        return self.vectors[0].dim

    def is_complete(self) -> bool:
        return len(self.vectors) == self.dim

    def gram(self) -> np.ndarray:
        mat = np.array([v.amps for v in self.vectors])
        return mat.conj() @ mat.T

    def __len__(self) -> int:
        return len(self.vectors)

    def __getitem__(self, j: int) -> StateVector:
        return self.vectors[j]


@dataclass(frozen=True, eq=False)
class LinearMap2:
    """A 2x2 complex map with its determinant on record.

    Entries follow the 1-based ``entry(j, k)`` convention of the detected-basis
    change maps: row j, column k.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.shape != (2, 2):
            raise ValueError(f"expected a 2x2 map, got shape {arr.shape}")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValueError("map entries must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def entry(self, j: int, k: int) -> complex:
        return complex(self.entries[j - 1, k - 1])

    @property
    def det(self) -> complex:
        return self.entry(1, 1) * self.entry(2, 2) - self.entry(2, 1) * self.entry(1, 2)

    def max_entry(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def scaled_to_unit_max(self) -> "LinearMap2":
        m = self.max_entry()
        if m == 0.0:
            raise ValueError("cannot rescale the zero map")
        return LinearMap2(self.entries / m)

    def is_invertible(self, tol: float = ATOL) -> bool:
        scale = self.max_entry()
        return scale > 0.0 and abs(self.det) > tol * scale * scale

    @classmethod
    def identity(cls) -> "LinearMap2":
        return cls(np.eye(2))

    @classmethod
    def swap(cls) -> "LinearMap2":
        return cls(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def __repr__(self) -> str:
        return f"LinearMap2({np.array2string(self.entries, precision=6)})"


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product with the first factor slowest (row-major ordering)."""
    return StateVector(np.kron(a.amps, b.amps))


def inner(a: StateVector, b: StateVector) -> complex:
    """Inner product, conjugate-linear in the first argument."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amps, b.amps))


def born_probabilities(psi: StateVector, basis: Basis) -> np.ndarray:
    """Squared overlaps of ``psi`` with each basis vector, in basis order."""
    if psi.dim != basis.dim:
        raise ValueError(f"dimension mismatch: {psi.dim} vs {basis.dim}")
    return np.array([abs(inner(v, psi)) ** 2 for v in basis.vectors])


def expand(psi: StateVector, basis: Basis) -> np.ndarray:
    """Coefficients of ``psi`` in a complete orthonormal basis.

    Reconstruction ``sum_j coeff[j] * basis[j]`` reproduces ``psi`` to 1e-12.
    """
    if psi.dim != basis.dim:
        raise ValueError(f"dimension mismatch: {psi.dim} vs {basis.dim}")
    if not basis.is_complete():
        raise ValueError(f"basis has {len(basis)} vectors but dim is {basis.dim}")
    return np.array([inner(v, psi) for v in basis.vectors])


def reconstruct(coefficients, basis: Basis) -> StateVector:
    """Inverse of :func:`expand`: assemble a vector from basis coefficients."""
    coeffs = np.asarray(coefficients, dtype=complex)
    if coeffs.shape != (len(basis),):
        raise ValueError(f"expected {len(basis)} coefficients, got shape {coeffs.shape}")
    mat = np.array([v.amps for v in basis.vectors])
    return StateVector(coeffs @ mat)
