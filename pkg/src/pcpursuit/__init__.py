"""Low-rank + sparse separation by principal component pursuit.

Library surface:

- :mod:`pcpursuit.core` -- SVD, norms, generators, support masks
- :mod:`pcpursuit.matio` -- text file formats for matrices and masks
- :mod:`pcpursuit.prox` -- shrink / singular value thresholding / projections
- :mod:`pcpursuit.solver` -- the alternating-directions solvers
- :mod:`pcpursuit.synth` -- random instances with ground truth
- :mod:`pcpursuit.certify` -- incoherence and dual-certificate diagnostics
- :mod:`pcpursuit.harness` -- benchmark tables and phase-transition grids
- :mod:`pcpursuit.cli` -- the ``pcpursuit`` command
"""

from .certify import (
    CertificateReport,
    ConcentrationStats,
    IncoherenceReport,
    SeriesDivergenceError,
    SeriesNonConvergenceError,
    build_wl_golfing,
    build_ws_neumann,
    certify_instance,
    golfing_partition,
    incoherence,
    measure_concentration,
)
from .core import (
    NumericalError,
    SupportMask,
    SvdFactors,
    gen_bernoulli_mask,
    gen_gaussian,
    gen_uniform_mask,
    norms,
    numerical_rank,
    svd_full,
    svd_truncated,
)
from .harness import (
    BenchRow,
    CellResult,
    PhaseGridSpec,
    PhaseTrial,
    run_bench_table,
    run_phase_grid,
)
from .matio import ParseError, read_mask, read_matrix, write_mask, write_matrix
from .prox import (
    PowerIterationError,
    TangentSpace,
    op_norm_composed,
    proj_support,
    proj_tangent,
    proj_tangent_complement,
    shrink,
    svt,
)
from .rng import RngState
from .solver import (
    PcpSolution,
    SolverConfig,
    solve_nuclear_completion,
    solve_pcp,
    solve_pcp_completion,
)
from .synth import ProblemInstance, ProblemSpec, gen_completion_problem, gen_problem, trim_support

__version__ = "0.1.0"

__all__ = [
    "BenchRow",
    "CellResult",
    "CertificateReport",
    "ConcentrationStats",
    "IncoherenceReport",
    "NumericalError",
    "ParseError",
    "PcpSolution",
    "PhaseGridSpec",
    "PhaseTrial",
    "PowerIterationError",
    "ProblemInstance",
    "ProblemSpec",
    "RngState",
    "SeriesDivergenceError",
    "SeriesNonConvergenceError",
    "SolverConfig",
    "SupportMask",
    "SvdFactors",
    "TangentSpace",
    "build_wl_golfing",
    "build_ws_neumann",
    "certify_instance",
    "gen_bernoulli_mask",
    "gen_completion_problem",
    "gen_gaussian",
    "gen_problem",
    "gen_uniform_mask",
    "golfing_partition",
    "incoherence",
    "measure_concentration",
    "norms",
    "numerical_rank",
    "op_norm_composed",
    "proj_support",
    "proj_tangent",
    "proj_tangent_complement",
    "read_mask",
    "read_matrix",
    "run_bench_table",
    "run_phase_grid",
    "shrink",
    "solve_nuclear_completion",
    "solve_pcp",
    "solve_pcp_completion",
    "svd_full",
    "svd_truncated",
    "svt",
    "trim_support",
    "write_mask",
    "write_matrix",
]
