"""Exact dynamics of one or two central qubits coupled to a Dicke-state spin bath."""
from .dicke_basis import (
    BathState,
    CapacityError,
    binomial,
    equally_weighted,
    fully_polarized,
    pair_elements,
    spin_coherent,
    w_class,
)
from .individual_baths import JointInitialState, compose
from .intrabath import PairDensity, pair_density, reduced_concurrence
from .measures import (
    concurrence,
    purity,
    relative_entropy_of_coherence,
    von_neumann_entropy,
)
from .rk import IntegrationError
from .single_qubit import QubitState, SingleQubitParams
from .two_qubit import TwoQubitParams, TwoQubitState

__all__ = [
    "BathState",
    "CapacityError",
    "IntegrationError",
    "JointInitialState",
    "PairDensity",
    "QubitState",
    "SingleQubitParams",
    "TwoQubitParams",
    "TwoQubitState",
    "binomial",
    "compose",
    "concurrence",
    "equally_weighted",
    "fully_polarized",
    "pair_density",
    "pair_elements",
    "purity",
    "reduced_concurrence",
    "relative_entropy_of_coherence",
    "spin_coherent",
    "von_neumann_entropy",
    "w_class",
]
