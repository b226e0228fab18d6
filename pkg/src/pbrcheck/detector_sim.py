"""Detector couplings and the branch decompositions they produce.

Two device families are modelled:

* :class:`LocalProductDetector` — one detector per subsystem. Each detector
  responds to a pair of single-system states (the columns of an invertible
  change-of-basis map) and copies the detected index into its pointer
  without disturbing the particle. The post-coupling state is a sum of
  branches, one per detected product state, each tagged with the pointer
  pair it would display.
* :class:`JointDetector` — a single device reading out an orthonormal basis
  of the compound system, with one opaque reading label per basis vector.

Pointers are classical labels attached to branches rather than extra tensor
factors: the couplings are diagonal in the detected basis, so the branch
amplitudes are identical either way and the state space stays 4-dimensional.

A detector satisfies the readout contract when every pure xi input produces
exactly one branch and the four readings are pairwise distinct; on
superpositions such a device then shows reading j on a fraction |a(j)|^2 of
runs. :func:`check_contract` decides this for any detector model.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .qcore import ATOL, Basis, LinearMap2, StateVector, inner, tensor
from .pbr_states import xi_basis

PRUNE_TOL = 1e-12

_SQRT_HALF = 2.0 ** -0.5


class Pointer(Enum):
    """A single detector pointer: x before coupling, 0 or 1 after."""

    X = "x"
    R0 = "0"
    R1 = "1"


@dataclass(frozen=True)
class PointerReading:
    a: Pointer
    b: Pointer

    def __str__(self) -> str:
        return f"{self.a.value},{self.b.value}"


Reading = Union[PointerReading, str]


@dataclass(frozen=True)
class BranchOutcome:
    """One branch of the post-coupling state: what it shows and its weight."""

    particle_labels: tuple[str, str]
    reading: Reading
    amplitude: complex

    def __post_init__(self):
        if isinstance(self.reading, PointerReading):
            if Pointer.X in (self.reading.a, self.reading.b):
                raise ValueError("pre-coupling pointer value x cannot appear in a branch")
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @property
    def probability(self) -> float:
        return abs(self.amplitude) ** 2


@dataclass(frozen=True)
class ContractVerdict:
    """Whether a detector meets the one-branch-per-xi, distinct-readings contract."""

    satisfied: bool
    witness: tuple[int, frozenset] | None = None


def _pointer_for_index(k: int) -> Pointer:
    # detected index 1 -> pointer 0, index 2 -> pointer 1
    return Pointer.R0 if k == 1 else Pointer.R1


@dataclass(frozen=True)
class LocalProductDetector:
    """A pair of single-system detectors defined by invertible basis maps.

    ``u`` (side A) and ``u_prime`` (side B) express the computational states
    in terms of the states each detector actually responds to: computational
    state j-1 equals sum_k entry(j,k) times detected state k. Identity maps
    give the plain 0/1 detector on each side.
    """

    u: LinearMap2
    u_prime: LinearMap2

    def __post_init__(self):
        for name, m in (("u", self.u), ("u_prime", self.u_prime)):
            if not m.is_invertible():
                raise ValueError(f"{name} must be invertible to define a detector")

    def detected_product_states(self) -> list[tuple[int, int, StateVector]]:
        """The four detected product states |A',k>|B',l> with their indices."""
        va = np.linalg.inv(self.u.entries.T)
        vb = np.linalg.inv(self.u_prime.entries.T)
        out = []
        for k in (1, 2):
            for l in (1, 2):
                vec = tensor(StateVector(va[:, k - 1]), StateVector(vb[:, l - 1]))
                out.append((k, l, vec))
        return out

    def detect(self, psi: StateVector) -> tuple[BranchOutcome, ...]:
        """Branch decomposition of ``psi`` over the detected product states.

        Branch weights are Born probabilities only when the detected basis is
        orthonormal (unitary maps); for general invertible maps they are the
        expansion coefficients, carried as-is.
        """
        if psi.dim != 4:
            raise ValueError(f"expected a 4-dimensional input, got dim {psi.dim}")
        cells = self.detected_product_states()
        matrix = np.stack([vec.amps for _, _, vec in cells], axis=1)
        coeffs = np.linalg.solve(matrix, psi.amps)
        branches = []
        for (k, l, _), amp in zip(cells, coeffs):
            if abs(amp) < PRUNE_TOL:
                continue
            branches.append(
                BranchOutcome(
                    particle_labels=(f"A'{k}", f"B'{l}"),
                    reading=PointerReading(_pointer_for_index(k), _pointer_for_index(l)),
                    amplitude=amp,
                )
            )
        return tuple(branches)


@dataclass(frozen=True)
class JointDetector:
    """A device reading out an orthonormal compound basis, one label per vector."""

    readout: Basis
    readings: tuple[str, ...]

    def __post_init__(self):
        if len(self.readings) != len(self.readout):
            raise ValueError("one reading label per readout vector required")
        if len(set(self.readings)) != len(self.readings):
            raise ValueError("reading labels must be distinct")

    def detect(self, psi: StateVector) -> tuple[BranchOutcome, ...]:
        if psi.dim != self.readout.dim:
            raise ValueError(f"dimension mismatch: {psi.dim} vs {self.readout.dim}")
        branches = []
        for vec, label, reading in zip(
            self.readout.vectors, self.readout.labels, self.readings
        ):
            amp = inner(vec, psi)
            if abs(amp) < PRUNE_TOL:
                continue
            branches.append(
                BranchOutcome(
                    particle_labels=(label, label),
                    reading=reading,
                    amplitude=amp,
                )
            )
        return tuple(branches)


DetectorModel = Union[LocalProductDetector, JointDetector]


def simple_detector() -> LocalProductDetector:
    """The plain 0/1 detector pair: each side reads its particle's bit."""
    return LocalProductDetector(LinearMap2.identity(), LinearMap2.identity())


def standard_joint_detector() -> JointDetector:
    """The xi-basis readout device with labels r1..r4."""
    return JointDetector(readout=xi_basis(), readings=("r1", "r2", "r3", "r4"))


def couple_simple(psi: StateVector) -> tuple[BranchOutcome, ...]:
    """Branches after the plain 0/1 detector pair couples to ``psi``.

    The coupling copies each computational bit into the matching pointer, so
    the candidate branches carry exactly psi's computational amplitudes.
    Branch order is pointer pair (1,1), (1,0), (0,1), (0,0); branches below
    the pruning tolerance are dropped.
    """
    if psi.dim != 4:
        raise ValueError(f"expected a 4-dimensional input, got dim {psi.dim}")
    order = ((1, 1), (1, 0), (0, 1), (0, 0))
    branches = []
    for a_bit, b_bit in order:
        amp = complex(psi.amps[2 * a_bit + b_bit])
        if abs(amp) < PRUNE_TOL:
            continue
        branches.append(
            BranchOutcome(
                particle_labels=(str(a_bit), str(b_bit)),
                reading=PointerReading(
                    Pointer.R1 if a_bit else Pointer.R0,
                    Pointer.R1 if b_bit else Pointer.R0,
                ),
                amplitude=amp,
            )
        )
    return tuple(branches)


def closed_form_branch_amplitudes(a: Sequence[complex]) -> np.ndarray:
    """Post-coupling branch amplitudes of the plain detector pair, written
    directly in terms of the xi-basis coefficients of the input.

    Input ``a`` holds the four xi coefficients (unit total weight); the
    return holds the amplitudes of the pointer branches (1,1), (1,0), (0,1),
    (0,0) in that order. This is the closed-form counterpart of running
    :func:`couple_simple` on ``sum_j a[j] xi(j)`` and must agree with it.
    """
    arr = np.asarray(a, dtype=complex)
    if arr.shape != (4,):
        raise ValueError(f"expected 4 coefficients, got shape {arr.shape}")
    total = float(np.sum(np.abs(arr) ** 2))
    if abs(total - 1.0) > ATOL:
        raise ValueError(f"coefficients must carry unit weight, got {total!r}")
    a1, a2, a3, a4 = arr
    return np.array(
        [
            a2 / 2 + a3 / 2 - a4 * _SQRT_HALF,
            a1 * _SQRT_HALF + a2 / 2 - a3 / 2,
            a1 * _SQRT_HALF - a2 / 2 + a3 / 2,
            a2 / 2 + a3 / 2 + a4 * _SQRT_HALF,
        ]
    )


def joint_xi_detector(psi: StateVector) -> tuple[BranchOutcome, ...]:
    """Branches after the xi-basis readout device couples to ``psi``.

    One branch per xi vector with nonzero coefficient; branch j carries the
    opaque reading ``rj`` and amplitude <xi(j)|psi>, so squared branch
    weights are the Born probabilities.
    """
    return standard_joint_detector().detect(psi)


def check_contract(detector: DetectorModel) -> ContractVerdict:
    """Decide whether a detector meets the readout contract.

    Feeds each pure xi vector through the detector. Satisfied iff every
    input yields exactly one branch and the four readings are pairwise
    distinct; the witness records the first failing xi index together with
    the readings observed there.
    """
    basis = xi_basis()
    seen: dict = {}
    for j, vec in enumerate(basis.vectors, start=1):
        branches = detector.detect(vec)
        readings = frozenset(br.reading for br in branches)
        if len(branches) != 1:
            return ContractVerdict(satisfied=False, witness=(j, readings))
        reading = branches[0].reading
        if reading in seen:
            return ContractVerdict(satisfied=False, witness=(j, frozenset({reading})))
        seen[reading] = j
    return ContractVerdict(satisfied=True, witness=None)
