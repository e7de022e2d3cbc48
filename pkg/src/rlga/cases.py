"""Named farm cases: farm size, lattice pitch and wind scenario."""

from __future__ import annotations

from dataclasses import dataclass

ROTOR_DIAMETER = 40.0


@dataclass(frozen=True)
class Case:
    name: str
    extent: tuple[float, float]
    spacing: float
    scenario: str

    @property
    def spacing_diameters(self) -> float:
        return self.spacing / ROTOR_DIAMETER


_FARMS = {
    "I": ((2000.0, 2000.0), 5 * ROTOR_DIAMETER),
    "II": ((2000.0, 2000.0), 2 * ROTOR_DIAMETER),
    "III": ((6000.0, 6000.0), 5 * ROTOR_DIAMETER),
}

CASES = {
    f"{farm}{wind}": Case(f"{farm}{wind}", extent, spacing, wind)
    for farm, (extent, spacing) in _FARMS.items()
    for wind in "ABC"
}

SCENARIO_LABELS = {
    "A": "unidirectional uniform",
    "B": "omnidirectional uniform",
    "C": "spread non-uniform",
}


def get_case(name: str) -> Case:
    try:
        return CASES[name.upper()]
    except KeyError:
        raise ValueError(f"unknown case {name!r}; expected one of {', '.join(CASES)}") from None
