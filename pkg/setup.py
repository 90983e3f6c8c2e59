"""
CoxFiber
========

Exact computations for toric fiber spaces. Given a surjective toric morphism
``X -> Y`` with connected fibers, CoxFiber computes the divisor class group of
``X``, the fan of the general fiber, the classes supported on vertical
divisors, and checks that the Cox ring of a very general fiber is the
quotient of the localized Cox ring of ``X`` by the relations ``1 - u``. The
comparison is made degree by degree, by counting monomials on both sides.

::

  >>> from coxfiber import CoxFiberClient
  >>> from coxfiber.toric.fan import hirzebruch_fibration
  >>> client = CoxFiberClient()
  >>> ruling = client.morphism(hirzebruch_fibration(1))
  >>> ruling.vertical()
  <VerticalClassData Cl_pi=Z Cl_eta=Z>
  >>> ruling.verify_theorem(box_radius=3).passed
  True

  >>> # Blow-up certificates for bundles of weighted projective planes
  >>> bundle = client.wps_bundle((1, 1, 2), (1, 0))
  >>> bundle.morphism.source.nrays
  5

Features
--------

* Smith and Hermite normal forms, kernels and cokernels over the integers
* Fan validation, completeness and fiber fans
* Class groups, vertical classes and divisor subgroups avoiding them
* Hilbert function comparison of the fiber Cox ring
* Blow-up class ledgers and non-finite generation certificates
* A ``coxfiber`` command line tool with JSON output

CoxFiber is released under the `MIT License`_.

.. _MIT License: http://www.opensource.org/licenses/mit-license
"""

from setuptools import setup

setup(
    name="CoxFiber",
    version="0.1.0",
    author="TeamUp",
    description="Exact class groups and Cox rings of toric fiber spaces.",
    long_description=__doc__,
    license="MIT",
    install_requires=[
        "numpy",
        "sympy",
    ],
    packages=[
        "coxfiber",
        "coxfiber.toric",
    ],
    entry_points={
        "console_scripts": ["coxfiber=coxfiber.cli:main"],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
