"""Small and large kernels in digraphs, with brute-force oracles."""

from .acyclic import (
    k_kernel_arborescence,
    k_kernel_single_source_acyclic,
    tight_instance,
    unique_one_kernel,
)
from .breaks import large_two_kernel
from .graph import (
    Digraph,
    InvariantViolation,
    KernelCertificate,
    PreconditionError,
    build_digraph,
    classify_partition,
    is_k_kernel,
    reduce_digons,
    verify_kernel,
)
from .split import small_quasi_kernel, small_quasi_kernel_general

__all__ = [
    "Digraph",
    "InvariantViolation",
    "KernelCertificate",
    "PreconditionError",
    "build_digraph",
    "classify_partition",
    "is_k_kernel",
    "k_kernel_arborescence",
    "k_kernel_single_source_acyclic",
    "large_two_kernel",
    "reduce_digons",
    "small_quasi_kernel",
    "small_quasi_kernel_general",
    "tight_instance",
    "unique_one_kernel",
    "verify_kernel",
]
