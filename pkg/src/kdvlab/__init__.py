"""Finite-difference laboratory for the Korteweg-de Vries equation.

Solves u_t - 1.5 u u_x + u_xxx = 0 with an explicit scheme and two
Crank-Nicolson linearizations over a hand-rolled pentadiagonal banded
solver, plus the analysis tooling (amplification factors, truncation
defects, spectral probes, convergence studies) needed to judge them.
"""

from .analysis import (
    AmplificationPoint,
    ScanRow,
    StencilKind,
    apply_stencil,
    cn_amplification,
    explicit_amplification,
    observed_order,
    stability_scan,
    truncation_error,
)
from .banded import (
    CertificateReport,
    Pentadiagonal,
    PowerIterationReport,
    dense_reference_solve,
    gram_power_iteration,
    invertibility_certificate,
    matvec,
    matvec_transpose,
    power_iteration,
    solve_banded,
)
from .crank_nicolson import (
    CnConfig,
    GammaMode,
    LinearizationKind,
    assemble_implicit,
    assemble_lagged,
    cn_step_implicit,
    cn_step_lagged,
    run_cn,
)
from .errors import (
    BlowUpError,
    ConfigError,
    FixedPointError,
    KdvLabError,
    OracleError,
    SingularMatrixError,
)
from .evolution import RunResult, SnapshotDiagnostics, peak_abscissa
from .explicit import ExplicitConfig, explicit_step, run_explicit
from .model import (
    Grid1D,
    SchemeParams,
    SolitonSpec,
    TimeGrid,
    WaveField,
    appendix_profile,
    initial_condition,
    mass,
    pde_residual,
    sech,
    sech_squared_profile,
    traveling_wave,
)

__version__ = "0.1.0"
