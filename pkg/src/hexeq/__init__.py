"""Exact verification of hex equation systems, lattice evolution and
polytope consistency."""
from __future__ import annotations

from .catalog import EquationSpec, eval_face, eval_quad, parse_spec, trapezoidal
from .hexsys import HexSystem, cah_verify, hex_solve_pair, solve_corner
from .lattice import IvpSpec, evolve, init_lattice
from .polytopes import combo_table, load_scenario, run_polytope
from .report import ConsistencyReport

__version__ = "0.1.0"

__all__ = [
    "ConsistencyReport", "EquationSpec", "HexSystem", "IvpSpec", "cah_verify", "combo_table",
    "eval_face", "eval_quad", "evolve", "hex_solve_pair", "init_lattice", "load_scenario",
    "parse_spec", "run_polytope", "solve_corner", "trapezoidal",
]
