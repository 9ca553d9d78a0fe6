"""Tame inertial types, Deligne-Lusztig data and parahoric Serre weights.

Everything is finite lattice combinatorics on a based root datum with a
Frobenius and an inertia automorphism; see ``catalog`` for ready-made groups.
"""

from .catalog import acceptance_ladder, all_catalog_specs, catalog
from .dl import (
    DLPacket,
    HerzigPresentation,
    dl_forward,
    dl_inverse,
    enumerate_dl_classes,
    make_presentation,
    niveau,
    regular_hodge_cocharacter,
)
from .errors import TameParamsError
from .lattice import TorsionVector, smith_normal_form, torsion_vector
from .rootdatum import BasedRootDatum, TameGroupSpec, make_spec, spec_from_json, validate
from .serre import (
    RecipeExpression,
    SerreWeight,
    herzig_R,
    is_regular,
    restricted_representative,
    serre_recipe,
    twisting_element,
    weights_equivalent,
)
from .tori import FiniteFieldTorus, point_count
from .twisted import TameInertialType, TwistedClass, canonicalize, enumerate_tame_types

__all__ = [
    "acceptance_ladder", "all_catalog_specs", "catalog", "DLPacket", "HerzigPresentation",
    "dl_forward", "dl_inverse", "enumerate_dl_classes", "make_presentation", "niveau",
    "regular_hodge_cocharacter", "TameParamsError", "TorsionVector", "smith_normal_form", "torsion_vector",
    "BasedRootDatum", "TameGroupSpec", "make_spec", "spec_from_json", "validate",
    "RecipeExpression", "SerreWeight", "herzig_R", "is_regular", "restricted_representative",
    "serre_recipe", "twisting_element", "weights_equivalent", "FiniteFieldTorus", "point_count",
    "TameInertialType", "TwistedClass", "canonicalize", "enumerate_tame_types",
    "__version__",
]

__version__ = "0.1.0"
