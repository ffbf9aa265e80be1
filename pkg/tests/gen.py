"""Seeded generators for random configurations, divisors and specs."""

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from kodaira_psef.invariants import FibrationSpec, InconsistentConfiguration
from kodaira_psef.kodaira import KodairaType, fibre_model
from kodaira_psef.lattice import DivisorVec
from kodaira_psef.zariski import Fibre, Configuration, VerticalDivisor

POOL = ["I0*", "II", "III", "IV", "II*", "III*", "IV*", "I1", "I2", "I3", "I5", "I1*", "I2*", "2I0", "3I0", "2I3"]


def random_configuration(rng: random.Random, max_fibres: int = 4) -> Configuration:
    n = rng.randint(1, max_fibres)
    fibres = []
    for k in range(n):
        t = KodairaType.parse(rng.choice(POOL))
        fibres.append(Fibre.from_model(f"C{k}", fibre_model(t)))
    return Configuration(tuple(fibres))


def random_rational(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo * 4, hi * 4), rng.choice([1, 2, 3, 4]))


def random_divisor(rng: random.Random, config: Configuration, density: float = 0.6) -> VerticalDivisor:
    parts = {}
    for f in config.fibres:
        parts[f.id] = DivisorVec({c: random_rational(rng) for c in f.components if rng.random() < density})
    phi = random_rational(rng, -2, 2) if rng.random() < 0.5 else Fraction(0)
    return VerticalDivisor(parts, phi)


SPEC_TYPES = ["I0", "2I0", "3I0", "5I0", "I1", "I2", "I3", "I6", "II", "III", "IV", "I0*", "I1*", "II*", "III*", "IV*"]


def enumerate_specs(limit: int, max_genus: int = 3, max_fibres: int = 6):
    """Deterministic valid specs, swept across genera and fibre multisets."""
    out = []
    for size in range(0, max_fibres + 1):
        for combo in combinations_with_replacement(SPEC_TYPES, size):
            for g in range(max_genus + 1):
                try:
                    out.append(FibrationSpec(g, list(combo)))
                except InconsistentConfiguration:
                    break
    rng = random.Random(20240601)
    rng.shuffle(out)
    return out[:limit] if limit else out
