"""Reference center-density values used by the CLI and the checks.

Every entry carries a provenance note naming the lattice it comes from,
and whether the value is proven optimal or only the best construction
known.  Values are exact where a closed form exists.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceConstant:
    n: int
    center_density: float
    status: str      # "proven" or "candidate"
    provenance: str


REFERENCE_CONSTANTS = (
    ReferenceConstant(
        n=1,
        center_density=0.5,
        status="proven",
        provenance="integer lattice Z, delta_1 = 1/2, trivially optimal",
    ),
    ReferenceConstant(
        n=2,
        center_density=1.0 / (2.0 * math.sqrt(3.0)),
        status="proven",
        provenance="hexagonal lattice A2, delta_2 = 1/(2 sqrt 3), optimal",
    ),
    ReferenceConstant(
        n=3,
        center_density=1.0 / (4.0 * math.sqrt(2.0)),
        status="proven",
        provenance="face-centered cubic lattice D3, delta_3 = 1/(4 sqrt 2)",
    ),
    ReferenceConstant(
        n=8,
        center_density=1.0 / 16.0,
        status="proven",
        provenance="root lattice E8, delta_8 = 1/16, optimal",
    ),
    ReferenceConstant(
        n=9,
        center_density=0.0442,
        status="candidate",
        provenance="laminated lattice Lambda9, best construction known",
    ),
    ReferenceConstant(
        n=24,
        center_density=1.0,
        status="proven",
        provenance="Leech lattice, delta_24 = 1, optimal",
    ),
    ReferenceConstant(
        n=25,
        center_density=0.707,
        status="candidate",
        provenance="laminated lattice Lambda25, best construction known",
    ),
)


def reference(n: int) -> ReferenceConstant:
    for entry in REFERENCE_CONSTANTS:
        if entry.n == n:
            return entry
    raise KeyError(f"no reference center density for dimension {n}")
