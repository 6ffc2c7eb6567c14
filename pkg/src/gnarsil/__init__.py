"""Deriving subsystem codes from stabilizer seed codes.

The subpackages follow the data flow: GF(2) algebra, symplectic Paulis,
tableaux, the splitting algorithms, distance search, product
constructions and representation counting.
"""

from .pauli import PauliOperator, commutes, format_pauli, parse_pauli
from .splitting import AlgorithmFailure, SplitConfig, gnarsil1, gnarsil2
from .tableau import CodeParams, CssCode, Tableau, build_css_tableau, compute_group_params, verify_subsystem

__all__ = [
    "AlgorithmFailure",
    "CodeParams",
    "CssCode",
    "PauliOperator",
    "SplitConfig",
    "Tableau",
    "build_css_tableau",
    "commutes",
    "compute_group_params",
    "format_pauli",
    "gnarsil1",
    "gnarsil2",
    "parse_pauli",
    "verify_subsystem",
]
