"""Clifford algebras, algebraic spinors, and bundle-formulated quantum evolution.

Layers, bottom up:

- multilinear: dense (p,q)-tensors, contraction, alternation, pull-back
- ga: blades, multivectors, wedge / interior / Clifford products over any
  nondegenerate symmetric real metric (exact or float scalars)
- spinor: regular representation, primitive idempotents, minimal left
  ideals, gamma/sigma matrices, spinor covariant and Lie derivatives
- transport: evolution transport along paths, connection coefficients,
  derivation along paths, bundle Schrodinger solutions
- fields: lattice Dirac / Klein-Gordon operators, the momentum operator,
  bundle-wrapped gammas, stress tensor and spin-vector packaging
- cli: the `clifbundle` verification front end
"""

from .config import DEFAULT_NMAX, HBAR, TransportTolerances, max_dimension
from .ga import (
    Metric,
    Multivector,
    Signature,
    basis_blades,
    clifford,
    even_odd_split,
    format_multivector,
    grade_project,
    interior,
    metric_dual,
    metric_raise,
    parse_multivector,
    scalar_product,
    wedge,
)
from .multilinear import LinearMap, Tensor, alternate, contract, pullback, tensor_product
from .spinor import (
    GammaSet,
    SigmaSet,
    find_primitive_idempotent,
    gamma_set_for_signature,
    minimal_left_ideal,
    orthogonalize_gammas,
    regular_rep,
    sigma_generators,
    spinor_cov_deriv,
    spinor_lie_deriv,
    spinor_rep_matrices,
    verify_iso_table,
)
from .transport import (
    HamiltonianSpec,
    Lifting,
    Path,
    Transport,
    Trivialization,
    connection_coeffs,
    evolve,
    matrix_bundle_hamiltonian,
    path_derivation,
    solve_bundle_schrodinger,
)
from .fields import (
    AffineConnection,
    EMPotential,
    FieldGammaSet,
    Grid,
    ScalarField,
    SpinorField,
    SpinVector,
    bundle_wrap,
    dalembert_identity,
    dirac_hamiltonian_evolve,
    dirac_slash,
    klein_gordon_evolve,
    klein_gordon_reduce,
    minkowski_gamma_set,
    momentum_op,
    spin_vector_package,
    stress_energy_spinvector,
    stress_tensor,
    wrapped_momentum,
)

__version__ = "0.1.0"
