"""Q-ary CSS code construction and evaluation toolkit.

Lifts binary column-weight-2 CSS pairs to GF(2^m), builds the extended
toric code family, expands back to binary, and evaluates codes with a
q-ary syndrome belief-propagation decoder over a depolarizing channel.
"""

from toriq.gf import GF2m, PRIMITIVE_POLY
from toriq.qmatrix import CycleWalk, SparseQMatrix, TannerGraph
from toriq.lift import BinaryCssPair, CssPairQ, lift_pair, quantum_dimension
from toriq.toric import ExtendedToricCode, ToricLayout, build_extended, build_skeleton
from toriq.expand import BinaryExpandedPair, expand_pair
from toriq.decode import BpResult, DecoderConfig, bp_decode, posterior_marginals, prior_from_bsc
from toriq.sim import ChannelModel, SimConfig, run_sweep

__all__ = [
    "GF2m",
    "PRIMITIVE_POLY",
    "SparseQMatrix",
    "TannerGraph",
    "CycleWalk",
    "BinaryCssPair",
    "CssPairQ",
    "lift_pair",
    "quantum_dimension",
    "ToricLayout",
    "ExtendedToricCode",
    "build_skeleton",
    "build_extended",
    "BinaryExpandedPair",
    "expand_pair",
    "DecoderConfig",
    "BpResult",
    "prior_from_bsc",
    "bp_decode",
    "posterior_marginals",
    "ChannelModel",
    "SimConfig",
    "run_sweep",
]
