"""Markovian open-system semigroups: generators from Kossakowski matrices,
complete-positivity and positivity tests for single and factorized maps."""
from .cp_analysis import (
    CpVerdict,
    KrausSet,
    Lemma1Witness,
    choi_matrix,
    is_completely_positive,
    kossakowski_cp_test,
    kraus_decomposition,
    lemma1_condition,
    lemma1_witness,
    perturbation_cp_interval,
)
from .dynamics import (
    DensityMatrix,
    closed_form_elementary,
    evolution_map,
    evolve_state,
    from_coherence_vector,
    to_coherence_vector,
    unitary_evolution,
)
from .generators import (
    GeneratorSpec,
    TracelessBasis,
    apply_generator,
    block_diag_kossakowski,
    build_traceless_basis,
    superoperator_matrix,
    tensor_sum_generator,
)
from .models import counterexample_generators
from .numerics import expectation, hermitian_eigensystem, kron, matrix_exponential, min_eigenvalue
from .positivity import (
    PositivityReport,
    SchmidtState,
    counterexample_eigenvalues,
    counterexample_Zt,
    min_output_eigenvalue,
    single_map_positivity_2d,
    theorem5_breakdown_search,
    verify_counterexample,
)

__version__ = "0.1.0"
