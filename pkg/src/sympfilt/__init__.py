"""sympfilt: exact linear algebra for symplectic filtrations, hermitian
modules over rings with involution, and closed-form moduli calculators."""

from .scalars import QQ, NumberField, PrimeField, DualNumbers, trace_form
from .linalg import Matrix, kernel_basis, solve_linear, rank

__all__ = [
    "QQ", "NumberField", "PrimeField", "DualNumbers", "trace_form",
    "Matrix", "kernel_basis", "solve_linear", "rank",
]
__version__ = "0.1.0"
