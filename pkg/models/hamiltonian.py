"""
Hamiltonian domain model.
Hamiltonians are sums of products of normalized Hermitian quadratic forms
H([z]) = sum_t c_t * prod_f (z* A_f z) / (z* z).
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from exceptions import ValidationError

HERMITIAN_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class HamiltonianTerm:
    """
    One product term c * prod_f (z* A_f z)/(z* z).

    Attributes:
        coefficient: real weight c
        factors: Hermitian matrices A_f, all of the same size
    """

    coefficient: float
    factors: Tuple[np.ndarray, ...]

    def __post_init__(self):
        """Validate data immediately after object creation."""
        factors = tuple(np.array(a, dtype=complex) for a in self.factors)
        object.__setattr__(self, 'factors', factors)
        self._validate()
        for a in self.factors:
            a.setflags(write=False)

    def _validate(self):
        """Raises ValidationError if a factor is not Hermitian."""
        if isinstance(self.coefficient, bool) or not isinstance(self.coefficient, (int, float)):
            raise ValidationError("Term coefficient must be a real number.")
        if not np.isfinite(self.coefficient):
            raise ValidationError("Term coefficient must be finite.")
        if not self.factors:
            raise ValidationError("A term needs at least one factor.")
        for a in self.factors:
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise ValidationError("Hamiltonian factors must be square matrices.")
            if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOLERANCE:
                raise ValidationError("Hamiltonian factors must be Hermitian.")
        if len({a.shape for a in self.factors}) != 1:
            raise ValidationError("All factors of a term must have the same size.")


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """
    A smooth S^1-invariant Hamiltonian on CP^n.

    Domain Rules:
    - n >= 1
    - every factor is an (n+1) x (n+1) Hermitian matrix
    - an empty term list is the zero Hamiltonian

    Attributes:
        n: projective dimension
        terms: product terms summed to form H
    """

    n: int
    terms: Tuple[HamiltonianTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        """Validate data immediately after object creation."""
        object.__setattr__(self, 'terms', tuple(self.terms))
        self._validate()

    def _validate(self):
        """Raises ValidationError if dimensions disagree."""
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError("Hamiltonian dimension n must be >= 1.")
        for term in self.terms:
            if not isinstance(term, HamiltonianTerm):
                raise ValidationError("Hamiltonian terms must be HamiltonianTerm values.")
            if term.factors[0].shape[0] != self.n + 1:
                raise ValidationError(
                    f"Hamiltonian factors must be {self.n + 1}x{self.n + 1}."
                )

    @property
    def is_zero(self) -> bool:
        """True for the zero Hamiltonian."""
        return all(t.coefficient == 0 for t in self.terms)

    @property
    def is_quadratic(self) -> bool:
        """True when every term has a single factor (unitary flows)."""
        return all(len(t.factors) == 1 for t in self.terms)

    @classmethod
    def quadratic(cls, matrix: np.ndarray, coefficient: float = 1.0) -> 'HamiltonianSpec':
        """H = c * z*Az / z*z."""
        matrix = np.asarray(matrix, dtype=complex)
        return cls(matrix.shape[0] - 1, (HamiltonianTerm(coefficient, (matrix,)),))

    def describe(self) -> dict:
        """Serializable descriptor, echoed verbatim into reports."""
        return {
            'n': self.n,
            'terms': [
                {
                    'coefficient': float(t.coefficient),
                    'factors': [
                        {'real': a.real.tolist(), 'imag': a.imag.tolist()}
                        for a in t.factors
                    ]
                }
                for t in self.terms
            ]
        }
