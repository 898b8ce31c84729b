"""Coherent approximation and opinion pooling under additive Bregman divergences."""
from .agenda import Agenda, Profile, SolveReport, is_coherent, omniscient, validate_agenda, world_distribution
from .divergence import GKL, SED, BregmanGenerator, affine_shifted, bregman, generator, phi_prime_inverse, power
from .errors import *  # noqa: F401,F403
from .fixing import fix, fix_d1, fix_d2, fix_gkl, fix_sed, project_coherent_general
from .pooling import (agg_d1, agg_d2, dictator_select, geometric_pool, geometric_pool_unnormalized,
                      linear_pool)
from .wcap import wcap_d1, wcap_d2, wcap_general

__version__ = "0.1.0"
