"""
This is your main interface to CoxFiber. Create a client, hand it fans and
morphisms (as objects, decoded JSON or file paths) and work with the wrapper
objects it returns::

    >>> from coxfiber import CoxFiberClient
    >>> from coxfiber.toric.fan import hirzebruch_fibration
    >>> client = CoxFiberClient()
    >>> ruling = client.morphism(hirzebruch_fibration(1))
    >>> ruling
    <CoxFiberMorphism F1 -> P1>
    >>> ruling.verify_theorem().passed
    True

The ``seed`` used by randomized searches comes from the ``COXFIBER_SEED``
environment variable when not given, and defaults to ``0``.
"""

import os

from coxfiber.data import load_fan, load_morphism
from coxfiber.exceptions import CoxFiberInvalidError
from coxfiber.toric.blowup import (
    FiberSpaceSpec,
    blowup_class_ledger,
    build_wps_bundle,
    certify_nonfg,
    check_construction_hypotheses,
)
from coxfiber.toric.coxring import verify_theorem, very_general_fiber_cox
from coxfiber.toric.divclass import (
    choose_divisor_subgroup_K,
    class_group,
    lemma_prim1_check,
    principal_divisor,
    restriction_surjective,
    vertical_class_group,
    vertical_principal_lattice_check,
)
from coxfiber.toric.fan import Fan, ToricMorphism, fiber_subfan, is_complete

SEED_VARIABLE = "COXFIBER_SEED"


def default_seed():
    value = os.environ.get(SEED_VARIABLE)
    if value is None or not value.strip():
        return 0
    try:
        return int(value)
    except ValueError:
        raise CoxFiberInvalidError(
            "{0} must be an integer, got {1!r}.".format(SEED_VARIABLE, value)
        )


class CoxFiberClient(object):
    """
    Instantiate the client with optional run configuration.

    ``seed`` drives the randomized choice of a vertical-free divisor subgroup;
    leave it ``None`` to read ``COXFIBER_SEED``. ``box_radius`` is the default
    radius of the degree box used when verifying the fiber theorem.
    """

    def __init__(self, seed=None, box_radius=10):
        self.seed = default_seed() if seed is None else int(seed)
        self.box_radius = box_radius

    def __repr__(self):
        return "<CoxFiberClient seed={0.seed} box={0.box_radius}>".format(self)

    def fan(self, data):
        """
        Pass in a :class:`Fan <coxfiber.toric.fan.Fan>`, a decoded fan object
        or the path of a fan file. Returns a
        :class:`CoxFiberFan <coxfiber.client.CoxFiberFan>`.
        """
        if not isinstance(data, Fan):
            data = load_fan(data)
        return CoxFiberFan(self, data)

    def morphism(self, data):
        """
        Pass in a :class:`ToricMorphism <coxfiber.toric.fan.ToricMorphism>`, a
        decoded morphism object or the path of a morphism file. Returns a
        :class:`CoxFiberMorphism <coxfiber.client.CoxFiberMorphism>`.
        """
        if not isinstance(data, ToricMorphism):
            data = load_morphism(data)
        return CoxFiberMorphism(self, data)

    def wps_bundle(self, weights, v):
        """
        Builds the bundle of weighted projective spaces with the given weights
        over ``P1``, twisted by ``v``, and returns its projection as a
        :class:`CoxFiberMorphism <coxfiber.client.CoxFiberMorphism>`.
        """
        return CoxFiberMorphism(self, build_wps_bundle(weights, v))


class CoxFiberFan(object):
    """A validated fan and the toric divisor data computed from it."""

    def __init__(self, client, fan):
        self._client = client
        self.fan = fan
        self._class_data = None

    def __repr__(self):
        return "<CoxFiberFan {0.fan.label}>".format(self)

    def validate(self):
        self.fan.validate()
        return True

    def is_complete(self):
        return is_complete(self.fan)

    def class_group(self):
        """
        Returns the :class:`DivisorClassData
        <coxfiber.toric.divclass.DivisorClassData>` of the fan.
        """
        if self._class_data is None:
            self._class_data = class_group(self.fan)
        return self._class_data

    def principal_divisor(self, m):
        return principal_divisor(self.class_group(), m)


class CoxFiberMorphism(object):
    """
    The interface for working with a toric fiber space ``X -> Y``: fiber fan,
    vertical classes, the lattice checks, the fiber theorem and the blow-up
    certificate.
    """

    def __init__(self, client, morphism):
        self._client = client
        self.morphism = morphism

    def __repr__(self):
        return "<CoxFiberMorphism {0} -> {1}>".format(
            self.morphism.source.label, self.morphism.target.label
        )

    @property
    def spec(self):
        return FiberSpaceSpec(self.morphism)

    def class_data(self):
        return class_group(self.morphism.source)

    def fiber_fan(self):
        return fiber_subfan(self.morphism)

    def vertical(self):
        return vertical_class_group(self.class_data(), self.morphism)

    def restriction(self):
        return restriction_surjective(self.class_data(), self.morphism)

    def verify_lattices(self):
        return vertical_principal_lattice_check(self.class_data(), self.morphism)

    def choose_k(self, seed=None):
        seed = self._client.seed if seed is None else seed
        return choose_divisor_subgroup_K(self.class_data(), self.morphism, seed)

    def prim1_check(self, seed=None):
        """
        Chooses a vertical-free divisor subgroup with ``seed`` (the client seed
        by default) and runs the ``K0_eta / i*(K0)`` comparison on it.
        """
        K = self.choose_k(seed)
        return lemma_prim1_check(self.class_data(), self.morphism, K)

    def verify_theorem(self, box_radius=None):
        if box_radius is None:
            box_radius = self._client.box_radius
        return verify_theorem(self.morphism, box_radius)

    def very_general_fiber_cox(self):
        return very_general_fiber_cox(self.morphism)

    def hypotheses(self):
        return check_construction_hypotheses(self.spec)

    def ledger(self):
        return blowup_class_ledger(self.spec)

    def certify(self, citation, box_radius=None):
        if box_radius is None:
            box_radius = min(self._client.box_radius, 5)
        return certify_nonfg(self.spec, citation, box_radius)
