"""Monic polynomials from their roots and Horner evaluation modulo an integer."""

from typing import Iterable

from ..models.keys import Polynomial
from ..utils.errors import DomainError


def poly_from_roots(roots: Iterable[int], modulus: int) -> Polynomial:
    """Expand prod (x - r_j) mod modulus, one linear factor at a time."""
    if modulus <= 1:
        raise DomainError(f"modulus must exceed 1, got {modulus}")
    coefficients = [1]
    for root in roots:
        if not 0 <= root < modulus:
            raise DomainError(f"root {root} is not reduced modulo {modulus}")
        expanded = [0] * (len(coefficients) + 1)
        for i, c in enumerate(coefficients):
            expanded[i + 1] = (expanded[i + 1] + c) % modulus
            expanded[i] = (expanded[i] - root * c) % modulus
        coefficients = expanded
    return Polynomial(tuple(coefficients), modulus)


def poly_eval_horner(polynomial: Polynomial, x: int, modulus: int) -> int:
    """P(x) mod modulus with gamma multiplications and gamma additions."""
    if not 0 <= x < modulus:
        raise DomainError(f"x={x} is not reduced modulo {modulus}")
    acc = 0
    for coefficient in reversed(polynomial.coefficients):
        acc = (acc * x + coefficient) % modulus
    return acc
