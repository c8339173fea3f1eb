"""Exact congruence checks and residue-class experiments for Hermitean
matrices whose entries are roots of unity."""

__version__ = "0.1.0"

from .cyclotomic import (
    CycElem,
    RealCoords,
    ResidueLattice,
    RingContext,
    make_ring,
    residue_lattice,
)
from .matrices import (
    Graph,
    HermitianRootMatrix,
    SeidelMatrix,
    WalkMatrix,
    a_transform,
    enumerate_matrices,
    find_euler_switching,
    residue_graph,
    sample,
    seidel_embed,
    switch,
    underlying_graph,
)
from .charpoly import (
    CharPoly,
    charpoly_real,
    congruence_report,
    power_sums,
    thm_a4k1_check,
)
from .experiments import (
    ExperimentReport,
    collect_classes,
    residue_key,
    run_experiment,
    sharpness_probe,
    theorem_bound,
)
from .walks import (
    closed_walks,
    harary_schwenk_check,
    orbit,
    orbit_partition_check,
    trace_congruence_suite,
    walk_weight,
)
