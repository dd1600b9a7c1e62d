"""Finitary approximations of topological spaces, Bratteli diagrams of
posets, and θ-quantization on the circle lattice."""
import os

# FINLAT_THREADS caps the BLAS/OpenMP pools; it must be set before numpy loads
_threads = os.environ.get("FINLAT_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

from .errors import FinlatError  # noqa: E402
from .topology import (FiniteSpace, HasseDiagram, Poset, closure, hasse, interior,  # noqa: E402
                       is_closed, is_open, is_T0, minimal_open_set, order_from_topology,
                       topology_from_order)
from .catalog import standard_poset  # noqa: E402
from .covering import Covering, CoverSet, SampledSpace, generate_topology, quotient, quotient_poset  # noqa: E402
from .tower import build_tower, coherent_sequences, limit_order, maximal_points  # noqa: E402
from .bratteli import closed_sets, level_partition, poset_to_bratteli, stable_tail, validate  # noqa: E402
from .af import BlockMatrix, block_norm, chain_model, embed, evaluate_at, level_algebra, point_algebra  # noqa: E402
from .theta import ThetaModel, connection, dirac, spectrum  # noqa: E402

__version__ = "0.1.0"
