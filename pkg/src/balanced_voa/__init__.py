"""Balanced root systems for holomorphic VOAs of central charge 32 and 40, and tests that rule them out."""
from .dgm import LatticeCatalog, classify_realization, fixed_rank, orbifold_image, orbifold_preimages
from .elimination import (
    PipelineResult,
    TestConfig,
    Verdict,
    character_test,
    dimension_test,
    jacobi_test,
    run_pipeline,
)
from .feasibility import LinearSystem, SearchBudget, has_nonneg_integer_solution, partition_exists
from .qseries import QSeries, derive_moment_identities, zv_character
from .rootsys import Factor, RootSystem, SimpleType, enumerate_brs, format_symbol, is_balanced, parse_symbol

__all__ = [
    "Factor", "LatticeCatalog", "LinearSystem", "PipelineResult", "QSeries", "RootSystem",
    "SearchBudget", "SimpleType", "TestConfig", "Verdict", "character_test", "classify_realization",
    "derive_moment_identities", "dimension_test", "enumerate_brs", "fixed_rank", "format_symbol",
    "has_nonneg_integer_solution", "is_balanced", "jacobi_test", "orbifold_image", "orbifold_preimages",
    "parse_symbol", "partition_exists", "run_pipeline", "zv_character",
]
