"""Harmonic analysis on finite truncations of bounded-type Vilenkin groups."""
from ._backend import available as available_backends, name as backend_name, use_backend
from .lemma import BandDecomposition, lemma1_construct
from .operators import (MeasureReport, OperatorFamily, distribution, exceptional_set,
                        maximal, partial_sum)
from .orlicz import PhiFunction, orlicz_integral
from .radix import (GroupPoint, RadixSequence, group_add, group_neg, make_radix_sequence,
                    parse_radices)
from .system import LevelFunction, character, dirichlet_kernel, rademacher
from .transform import SpectrumVector, convolve, forward, inverse, naive_forward
from .weak_type import WeakTypeFit, fit_hm, restricted_constant

__version__ = "0.1.0"
