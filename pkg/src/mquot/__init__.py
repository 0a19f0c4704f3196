"""Motivic classes of quotients of affine space by semi-linear affine actions,
finite field towers, and nearby-fiber congruences modulo L."""

from .action import AbelianGroupSpec, GeneratorDatum, SemiLinearAffineAction, normalize, validate
from .errors import *  # noqa: F401,F403
from .mclass import K0, K0_MOD, M, M_MOD, MotivicClass, RealizationSpec, RingTag, Session, mod_L, realize
from .nearby import SncModel, congruence_check, motivic_reduction, nearby_fiber, nearby_fiber_quotient
from .oracle import Budget, orbit_count_oracle
from .quotient import invariant_check, invariant_ring_d1, quotient_class, quotient_homomorphism

__version__ = "0.1.0"
