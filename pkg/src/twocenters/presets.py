"""Named charge configurations with a diagram window and a sample orbit."""

from __future__ import annotations

from dataclasses import dataclass

from twocenters.coords import ChargeConfig
from twocenters.separation import EnergyMomentum


@dataclass(frozen=True)
class Preset:
    name: str
    z1: float
    z2: float
    e_range: tuple[float, float]
    k_range: tuple[float, float]
    orbit: tuple[float, float]
    description: str

    @property
    def charges(self) -> ChargeConfig:
        return ChargeConfig(self.z1, self.z2)

    @property
    def em(self) -> EnergyMomentum:
        return EnergyMomentum(*self.orbit)


PRESETS = {
    p.name: p
    for p in (
        Preset("fig-bif0-attracting", 1, 1, (0, 5), (-8, 1), (3, -4), "equal attracting centers (Z+=2, Z-=0)"),
        Preset("fig-bif0-repelling", -1, -1, (0, 5), (-8, 3), (3, -2), "equal repelling centers (Z+=-2, Z-=0)"),
        Preset("fig-bif0-opposite", -1, 1, (0, 5), (-8, 3), (3, -2), "opposite unit centers (Z+=0, Z-=2)"),
        Preset("fig-motion20", 1, 1, (0, 5), (-8, 1), (3, -7), "Z+=2, Z-=0, orbits along E=3"),
        Preset("fig-motion-20", -1, -1, (0, 5), (-8, 3), (3, -2), "Z+=-2, Z-=0, orbits along E=3"),
        Preset("fig-motion02", -1, 1, (0, 5), (-8, 3), (3, -2), "Z+=0, Z-=2"),
        Preset("fig-bif1-attracting", 1, 2, (0, 5), (-10, 2), (2, -4), "fully attracting (Z+=3, Z-=1)"),
        Preset("fig-bif1-repelling", -2, -1, (0, 5), (-6, 4), (3, -1), "fully repelling (Z+=-3, Z-=1)"),
        Preset("fig-bif2-plus", -1, 2, (0, 3), (-6, 6), (1, -1.5), "|Z+| < Z-, Z+ > 0 (Z+=1, Z-=3)"),
        Preset("fig-bif2-minus", -1, 0.5, (0, 1), (-2, 2), (0.1, 0.5), "|Z+| < Z-, Z+ < 0 (Z+=-0.5, Z-=1.5)"),
        Preset("fig-bOrbit", -1, 0.5, (0, 1), (-2, 2), (0.1, 0.5), "bounded orbits near the attracting center"),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
