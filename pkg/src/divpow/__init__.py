"""Divided power operations on algebras over operads: exact coefficients,
partition combinatorics, operads and distributive laws, the divided Schur
functor Gamma(P, -) and verification suites."""

from ._backend import COMPILED
from .coefficients import Coefficient, Field, divided_coefficient, field, multinomial, vandermonde_check
from .combinatorics import (
    Composition,
    Permutation,
    SetPartition,
    coset_representatives,
    diamond,
    gamma_k,
    iota,
    partition_circ,
    pr,
    rhd,
    tensor_partitions,
    wreath_coset_representatives,
)
from .distributive import (
    POIS,
    DerivationLaw,
    PoissonLaw,
    ProductOperad,
    ShiftLaw,
    check_odl,
    der_law,
    der_operad,
    pois_law,
    shift_law,
    shift_operad,
)
from .gamma import (
    BetaExpression,
    BetaTerm,
    InvariantTensor,
    NotInvariant,
    Report,
    associator,
    beta_canonical,
    check_derivation,
    check_lambda_oracle,
    check_pois_compat,
    check_shift,
    frobenius_image,
    frobenius_of_product,
    gamma_monad_mult,
    levp_verify,
    tilde_lambda,
    tilde_lambda_oracle,
    to_free_algebra,
    verify_beta_relations,
)
from .operads import AS, COM, LIE, FreeAlgebraElement, OperadElement, frobenius_element, jacobson_s

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
