"""Rational maps between multi-projective varieties over QQ and prime fields."""

from .errors import MPVError
from .fields import GF, QQ
from .hilbert import multidegree, segre_degree
from .idealcalc import MHIdeal, multi_saturate, saturate
from .polyring import make_ring
from .ratmaps import MultiRationalMap, compose, identity_map
from .varieties import RationalPoint, ambient_space, describe, make_variety, segre_map

__version__ = "0.1.0"

__all__ = [
    "GF",
    "MHIdeal",
    "MPVError",
    "MultiRationalMap",
    "QQ",
    "RationalPoint",
    "ambient_space",
    "compose",
    "describe",
    "identity_map",
    "make_ring",
    "make_variety",
    "multi_saturate",
    "multidegree",
    "saturate",
    "segre_degree",
    "segre_map",
]
