"""Exact Bernoulli polynomials, their real roots, and checks of their root asymptotics."""

from .bernoulli import (
    BernoulliCache,
    bernoulli_number,
    bernoulli_polynomial,
    cache_load,
    cache_store,
    verify_identities,
    von_staudt_clausen_check,
)
from .ratpoly import Interval, RatPoly, SturmChain
from .roots import ceil_max_root, isolate_roots, max_root, real_root_count, root_report

__version__ = "0.1.0"
