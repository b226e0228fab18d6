"""The four product preparations and the entangled readout basis they forbid.

Single-system states: |0>, |1> and the balanced superpositions
|+> = (|0> + |1>)/sqrt2, |-> = (|0> - |1>)/sqrt2. Each of two independent
sources emits either |0> or |+>, so the compound system is prepared in one
of |0>|0>, |0>|+>, |+>|0>, |+>|+>.

The readout basis is the orthonormal entangled set

    xi1 = (|0>|1> + |1>|0>)/sqrt2
    xi2 = (|0>|-> + |1>|+>)/sqrt2
    xi3 = (|+>|1> + |->|0>)/sqrt2
    xi4 = (|+>|-> + |->|+>)/sqrt2

Each preparation is orthogonal to exactly one xi vector; which one is
recorded in :func:`forbidden_table` (verified numerically at call time, not
assumed). Indices are 1-based to match the xi labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .qcore import ATOL, Basis, StateVector, inner, tensor

SQRT_HALF = 1.0 / math.sqrt(2.0)


class PrepChoice(Enum):
    """What a single source emits: the |0> state or the |+> state."""

    ZERO = "0"
    PLUS = "+"


@dataclass(frozen=True)
class Preparation:
    a_choice: PrepChoice
    b_choice: PrepChoice

    def label(self) -> str:
        return f"|{self.a_choice.value}>|{self.b_choice.value}>"


PREPARATIONS: tuple[Preparation, ...] = (
    Preparation(PrepChoice.ZERO, PrepChoice.ZERO),
    Preparation(PrepChoice.ZERO, PrepChoice.PLUS),
    Preparation(PrepChoice.PLUS, PrepChoice.ZERO),
    Preparation(PrepChoice.PLUS, PrepChoice.PLUS),
)

ForbiddenTable = Mapping[Preparation, int]


def single_states() -> dict[str, StateVector]:
    """The four single-system states keyed by "0", "1", "+", "-"."""
    zero = StateVector([1.0, 0.0])
    one = StateVector([0.0, 1.0])
    plus = (zero + one) * SQRT_HALF
    minus = (zero - one) * SQRT_HALF
    return {"0": zero, "1": one, "+": plus, "-": minus}


def prepared_state(p: Preparation) -> StateVector:
    """Product state emitted when the two sources make the given choices."""
    states = single_states()
    return tensor(states[p.a_choice.value], states[p.b_choice.value])


def xi_basis() -> Basis:
    """The entangled readout basis, built from its defining superpositions.

    The vectors are assembled from the single-system states rather than
    written as numeric literals, so downstream orthogonality checks actually
    exercise the definitions.
    """
    s = single_states()
    xi1 = (tensor(s["0"], s["1"]) + tensor(s["1"], s["0"])) * SQRT_HALF
    xi2 = (tensor(s["0"], s["-"]) + tensor(s["1"], s["+"])) * SQRT_HALF
    xi3 = (tensor(s["+"], s["1"]) + tensor(s["-"], s["0"])) * SQRT_HALF
    xi4 = (tensor(s["+"], s["-"]) + tensor(s["-"], s["+"])) * SQRT_HALF
    return Basis(vectors=(xi1, xi2, xi3, xi4), labels=("xi1", "xi2", "xi3", "xi4"))


def forbidden_table() -> dict[Preparation, int]:
    """Map each preparation to the 1-based index of the xi vector it forbids.

    Raises RuntimeError if any claimed orthogonality fails or the table is
    not a bijection onto {1, 2, 3, 4}; neither can happen unless the state
    definitions above are mis-transcribed.
    """
    basis = xi_basis()
    table = {
        PREPARATIONS[0]: 1,
        PREPARATIONS[1]: 2,
        PREPARATIONS[2]: 3,
        PREPARATIONS[3]: 4,
    }
    for prep, k in table.items():
        overlap = abs(inner(prepared_state(prep), basis[k - 1]))
        if overlap >= ATOL:
            raise RuntimeError(
                f"forbidden-outcome check failed: |<{prep.label()}|xi{k}>| = {overlap:.3e}"
            )
    if sorted(table.values()) != [1, 2, 3, 4]:
        raise RuntimeError("forbidden table is not a bijection onto the xi indices")
    return table
