# ruff: noqa

"""
Class groups, fiber fans and Cox rings of toric fiber spaces.

All arithmetic is exact. Fans and morphisms are read from JSON files (see
:mod:`coxfiber.data`) or built in code (see :mod:`coxfiber.toric.fan`).

The client init arguments are as follows:

seed
    Seed of the randomized search for a vertical-free divisor subgroup. When
    omitted the ``COXFIBER_SEED`` environment variable is read, falling back
    to ``0``.

box_radius
    Default radius of the degree box on which the quotient presentation and
    the fiber Cox ring are compared.

"""

from coxfiber.client import CoxFiberClient
from coxfiber.data import load_fan, load_morphism
from coxfiber.exceptions import (
    CoxFiberCheckError,
    CoxFiberError,
    CoxFiberInvalidError,
)
from coxfiber.toric.fan import Fan, ToricMorphism
