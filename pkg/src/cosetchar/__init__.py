"""Exact characters of affine Lie algebra, Heisenberg and W-algebra modules,
coset branching functions, and verification suites for coset identities."""

from __future__ import annotations

from .affchar import (
    coset_cc,
    ell_of,
    fock_character,
    frenkel_kac_level1_character,
    growth,
    integrable_character,
    langlands_dual_level,
    minimal_cc,
    minimal_series_params,
    sugawara_cc,
    sugawara_h,
    verma_w_character,
    w_cc,
    w_h,
    weyl_module_character,
)
from .branching import (
    BranchingTable,
    ModuleFamily,
    decompose,
    generic_decomposition_check,
    gko_branching,
    heisenberg_coset_decompose,
    restrict_typeA,
)
from .gseries import GradedCharacter, QSeries
from .liealg import RootSystem, build_root_system, root_system
from .verify import Report

__version__ = "0.1.0"
