"""Central values, mollifiers and negative moments of Dirichlet L-functions."""

import json

from ._core import (
    CharacterGroup,
    InputError,
    IoError,
    ValidationError,
    big_omega,
    central_values,
    expand_coeffs,
    factorize,
    functional_equation_residual,
    gauss_sums,
    hurwitz_oracle,
    is_prime,
    moment,
    primitive_root,
    schedule,
    sieve_primes,
    truncated_exp,
    w_value,
)
from . import _core

__all__ = [
    "CharacterGroup",
    "InputError",
    "IoError",
    "ValidationError",
    "big_omega",
    "central_values",
    "expand_coeffs",
    "factorize",
    "functional_equation_residual",
    "gauss_sums",
    "hurwitz_oracle",
    "is_prime",
    "moment",
    "primitive_root",
    "scan",
    "schedule",
    "sieve_primes",
    "truncated_exp",
    "verify",
    "w_value",
]


def verify(q, k=-0.5, mode="relaxed", cuts=(31, 97), ells=(8, 6), N=2, M=1, ctol=10.0, seed=42):
    """Run every check on one instance and return the report as a dict."""
    text = _core._verify_json(q, k, mode, list(cuts), list(ells), N, M, ctol, seed)
    return json.loads(text)


def scan(q_list, k_list, mode="relaxed", cuts=(31, 97), ells=(8, 6), N=2, M=1, workers=1):
    """Moment rows and proposition rows over a grid, as lists of dicts."""
    moments, props = _core._scan_json(
        list(q_list), list(k_list), mode, list(cuts), list(ells), N, M, workers
    )
    return json.loads(moments), json.loads(props)
