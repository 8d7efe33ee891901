"""Lorentz-space Bohnenblust-Hille laboratory: sequence norms, multilinear and
polynomial sup norms, interpolation functionals, lower-bound constructions
and the Bohr lift."""
from . import kernels
from .errors import (
    BadParams,
    DomainError,
    EmptyInput,
    InstanceTooLarge,
    LabError,
    MalformedPartition,
    MalformedSubset,
    SymmetryViolation,
    WeightDomainError,
)
from .forms import (
    PolynomialCoefficients,
    SupNormEstimate,
    eval_form,
    poly_from_symmetric,
    polarization_factor,
    supnorm_form,
    supnorm_poly,
    symmetric_from_poly,
)
from .lorentz import LorentzParams, fundamental_function, lorentz_norm, marcinkiewicz_norm, weak_norm
from .mixed import CoefficientTensor, aggregate_norm, block_norm
from .multiindex import IndexSetSpec, cardinality, enumerate_indices

__version__ = "0.1.0"
