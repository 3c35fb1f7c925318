"""Exact-rational models of mapping-space components and their stability.

The package builds Sullivan-style algebraic models for the path components
of spaces of maps from the two-sphere into a simply connected target,
computes rational homotopy groups from them, and certifies that the
degree-d self-cover of the sphere induces an equivalence between the
models of a component and of its d-fold multiple.
"""

__version__ = "0.1.0"

from .algebra import Element, FreeGca, Generator
from .cdga import Cdga, CdgaMorphism, Differential, HomotopyTable
from .finite import FiniteCdga, sphere2_model
from .haefliger import HaefligerModel, SectionData, TargetModel

__all__ = [
    "Cdga",
    "CdgaMorphism",
    "Differential",
    "Element",
    "FiniteCdga",
    "FreeGca",
    "Generator",
    "HaefligerModel",
    "HomotopyTable",
    "SectionData",
    "TargetModel",
    "sphere2_model",
    "__version__",
]
