"""Structure-preserving canonical forms of normal Hamiltonian, skew-Hamiltonian,
per-Hermitian and perskew-Hermitian matrices."""

from .core import (
    BlockIndex,
    DimensionError,
    StructCanonError,
    f_matrix,
    j_matrix,
    off_diagonal_norm,
)
from .genmat import (
    GenSpec,
    rand_normal,
    rand_normal_hamiltonian,
    rand_normal_per_hermitian,
    rand_normal_perskew_hermitian,
    rand_normal_skew_hamiltonian,
    rand_unitary,
    rand_unitary_perplectic,
    rand_unitary_symplectic,
)
from .hamiltonian import (
    HamCanonicalForm,
    Phase1Result,
    TraceEntry,
    assemble_ham_canonical,
    canon_normal_hamiltonian,
    canon_normal_skew_hamiltonian,
    convergence_trace,
    phase1_diagonalize_hermitian_hamiltonian,
    phase2_reduce_skew_part,
)
from .jacobi import (
    ConvergenceError,
    EigenClustering,
    JacobiResult,
    cluster_values,
    hermitian_jacobi,
    normal_diagonalize_gh,
    skew_hermitian_diagonalize,
)
from .matrix_io import MatrixFormatError, read_matrix, write_matrix
from .perplectic import (
    EigenGrouping,
    PerHCanonicalForm,
    assemble_perh_canonical,
    canon_normal_per_hermitian,
    canon_normal_perskew_hermitian,
    extract_f_blocks,
    group_spectrum,
)
from .report import RunReport, SpyGrid
from .spectrum import match_spectra, spectrum_distance
from .structure import (
    Structure,
    StructureError,
    StructureReport,
    is_structure,
    structure_report,
)
from .transform import (
    GivensRotation,
    PermutationSpec,
    diagonalize_normal_2x2,
    givens_apply,
    symplectic_embed,
    symplectic_from_blockdiag,
)

__version__ = "0.1.0"
