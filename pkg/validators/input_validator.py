"""
Input validation utilities for command-line and file input.
Converts raw strings and JSON files into validated domain values,
separate from domain model validation.
"""

import json
from pathlib import Path
from typing import Tuple

import numpy as np
from scipy.linalg import polar

from exceptions import UsageError, ValidationError
from models import HamiltonianSpec, HamiltonianTerm, UnitaryMatrix

MODEL_NAMES = ('clifford', 'rp')
UNITARY_REPAIR_TOLERANCE = 1e-6


class InputValidator:
    """
    Responsible for converting raw user input
    into validated data that can be used to create domain models.
    """

    @staticmethod
    def parse_pair(value: str) -> Tuple[str, str]:
        """
        Parse a pair like 'clifford:rp'.
        Raises: UsageError: If the format or a model name is invalid
        """
        parts = [part.strip().lower() for part in str(value).split(':')]
        if len(parts) != 2:
            raise UsageError("Pair must look like A:B, e.g. clifford:clifford")
        for part in parts:
            if part not in MODEL_NAMES:
                raise UsageError(
                    f"Unknown model '{part}'. Choose from: {', '.join(MODEL_NAMES)}"
                )
        return parts[0], parts[1]

    @staticmethod
    def _read_json(path: str, what: str):
        """Read a JSON file or raise UsageError."""
        try:
            return json.loads(Path(path).read_text(encoding='utf-8'))
        except OSError as e:
            raise UsageError(f"Cannot read {what} file '{path}': {e}")
        except ValueError as e:
            raise UsageError(f"{what.capitalize()} file '{path}' is not valid JSON: {e}")

    @staticmethod
    def _complex_matrix(block, what: str) -> np.ndarray:
        """{'real': [[...]], 'imag': [[...]]} -> complex square matrix."""
        if not isinstance(block, dict) or 'real' not in block:
            raise UsageError(f"{what} needs a 'real' block (and optionally 'imag').")
        try:
            real = np.array(block['real'], dtype=float)
            imag = np.array(block.get('imag', np.zeros_like(real)), dtype=float)
        except (TypeError, ValueError):
            raise UsageError(f"{what} entries must be numbers.")
        if real.ndim != 2 or real.shape[0] != real.shape[1] or imag.shape != real.shape:
            raise UsageError(f"{what} must be a square matrix.")
        return real + 1j * imag

    @staticmethod
    def load_unitary(path: str, n: int) -> UnitaryMatrix:
        """
        Read g from a JSON file {'real': [[...]], 'imag': [[...]]}.
        Matrices within 1e-6 of unitary are replaced by their polar factor.
        Raises: UsageError: If the file is unreadable or g is not (close to) unitary
        """
        entries = InputValidator._complex_matrix(InputValidator._read_json(path, 'unitary'), 'Unitary')
        if entries.shape[0] != n + 1:
            raise UsageError(f"Unitary must be {n + 1}x{n + 1} for n = {n}.")
        defect = np.max(np.abs(entries.conj().T @ entries - np.eye(n + 1)))
        if defect > UNITARY_REPAIR_TOLERANCE:
            raise UsageError(f"Matrix is not unitary (defect {defect:.2e}).")
        nearest, _ = polar(entries)
        try:
            return UnitaryMatrix(nearest)
        except ValidationError as e:
            raise UsageError(str(e))

    @staticmethod
    def load_hamiltonian(path: str) -> HamiltonianSpec:
        """
        Read H from JSON:
        {"n": 2, "terms": [{"coefficient": 0.1, "factors": [{"real": ..., "imag": ...}]}]}
        Raises: UsageError: If the file is unreadable or H is invalid
        """
        data = InputValidator._read_json(path, 'Hamiltonian')
        if not isinstance(data, dict) or 'n' not in data:
            raise UsageError("Hamiltonian file needs an 'n' field.")
        try:
            terms = [
                HamiltonianTerm(
                    float(term['coefficient']),
                    tuple(InputValidator._complex_matrix(f, 'Factor') for f in term['factors'])
                )
                for term in data.get('terms', [])
            ]
            return HamiltonianSpec(int(data['n']), tuple(terms))
        except (KeyError, TypeError) as e:
            raise UsageError(f"Malformed Hamiltonian term: {e}")
        except ValidationError as e:
            raise UsageError(str(e))
