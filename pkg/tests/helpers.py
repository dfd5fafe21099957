"""Shared test utilities: random elements and small spec menageries."""

from __future__ import annotations

import random

from paradec import (
    GeneratingSet,
    cyclic_group,
    free_abelian_group,
    free_group,
    matrix_group,
)


def all_model_specs():
    return [
        free_group(2),
        free_group(3),
        free_abelian_group(1),
        free_abelian_group(2),
        cyclic_group(5),
        cyclic_group(12),
        matrix_group(),
    ]


def random_element(spec, rng: random.Random, length: int = 6):
    """Random product of up to ``length`` symmetrized generators."""
    gens = [el for _, el in spec.standard_generators()]
    gens += [spec.invert(el) for el in gens]
    x = spec.identity()
    for _ in range(rng.randrange(length + 1)):
        x = spec.multiply(x, rng.choice(gens))
    return x


def standard_gens(spec) -> GeneratingSet:
    return GeneratingSet.standard(spec)
