"""Pick matrices with a bounded number of negative eigenvalues, executable.

Builds Pick matrices of disk functions, computes their inertia, profiles
negative-square counts over node configurations, realizes the associated
J-unitary transfer matrices and Blaschke state-space models, and verifies
the classification and witness-size bounds on concrete functions.
"""

from .hermitian import (
    DEFAULT_TOL,
    EigenSolverError,
    HermitianMatrix,
    Inertia,
    NegSquaresError,
    NumericsError,
    SteinData,
    TolerancePolicy,
    ValidationError,
    equilibrated_inertia,
    inertia,
    max_nonsingular_principal_submatrix,
    schur_complement,
    solve_stein,
    stein_series_sum,
)
from .functions import (
    BlaschkeProduct,
    PointConfig,
    SchurBlaschke,
    SchurConstant,
    SchurPart,
    SchurPolynomial,
    SchurProduct,
    SchurScaled,
    StandardFunction,
    UndefinedAtPole,
    UnitDiskPoint,
    classify_counts,
    disk_samples,
    dump_function,
    function_from_document,
    function_to_document,
    krein_langer_quotient,
    load_function,
)
from .pick import (
    PickMatrixResult,
    ProfileResult,
    ProfileRow,
    Region,
    SearchBudget,
    build_pick,
    kn_profile,
    pick_entries,
    profile_to_csv,
    profile_to_document,
)
from .realization import (
    SIGNATURE_J,
    BlaschkeRealization,
    ExtensionPoleError,
    SingularPickError,
    ThetaRealization,
    build_theta,
    extract_sigma,
    realize_blaschke,
    reconstruct_f,
    theta_kernel_residual,
)
from .divdiff import (
    ClusterLimitReport,
    DividedDifferenceTable,
    PhiMatrix,
    cluster_limit_check,
    divided_diffs,
    intertwining_residual,
    jordan_companion,
    phi_congruence,
    phi_matrix,
    taylor_from_circle,
)
from .classify import (
    ClassificationReport,
    HindmarshReport,
    NSearchReport,
    WitnessPlan,
    WitnessReport,
    find_N,
    hindmarsh_test,
    plateau_classify,
    verify_witness,
    witness_plan,
)

__version__ = "0.1.0"
