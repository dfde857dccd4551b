"""
GlaisherKinkelin

A Python package for computing ln A, the logarithm of the Glaisher-Kinkelin
constant, through six independent routes at arbitrary precision.
"""

__version__ = '0.1.0'

# Make key classes available at package level
from .special_functions import (
    BigReal,
    DomainError,
    FundamentalConstants,
    PoleError,
    PrecisionError,
    SeriesResult,
    SpecialFunctions,
)
from .zeta_apostol import QuadratureConfig, ZetaApostol
from .glaisher_reps import (
    GlaisherKinkelin,
    IdentityName,
    IdentityReport,
    IdentityVariant,
    Representation,
    Series2Mode,
)
from .report_utils import merge_reports

# Define what gets imported with `from glaisher_kinkelin import *`
__all__ = [
    'BigReal',
    'DomainError',
    'FundamentalConstants',
    'PoleError',
    'PrecisionError',
    'SeriesResult',
    'SpecialFunctions',
    'QuadratureConfig',
    'ZetaApostol',
    'GlaisherKinkelin',
    'IdentityName',
    'IdentityReport',
    'IdentityVariant',
    'Representation',
    'Series2Mode',
    'merge_reports',
]
