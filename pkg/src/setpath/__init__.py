"""Set-matrix path/cycle detection, a brute-force oracle, and a differential miner."""

from .detector import (
    CycleReport,
    PathReport,
    build_R,
    build_S1,
    build_T,
    detect_cycles,
    detect_paths,
    hamiltonian_cycle,
    hamiltonian_path,
    language,
)
from .graph import Digraph, GraphParseError, GraphPopulation, parse_edge_list, parse_graph, parse_json_graph
from .oracle import bridge_set, oracle_k_cycles, oracle_k_paths
from .set_algebra import SetCell, SetMatrix, Universe, left_power, product, product_dual, right_power

__version__ = "0.1.0"
