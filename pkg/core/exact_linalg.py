"""
Exact Linear Algebra Module
Fraction-valued numpy object arrays, fraction-free inversion and echelon forms
"""
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from core.exceptions import SingularMatrixError


def fraction_vector(values: Iterable) -> np.ndarray:
    """1-D object array of Fractions"""
    items = [value if isinstance(value, Fraction) else Fraction(value) for value in values]
    vector = np.empty(len(items), dtype=object)
    vector[:] = items
    return vector


def fraction_matrix(rows: Iterable[Iterable]) -> np.ndarray:
    """2-D object array of Fractions"""
    data = [[value if isinstance(value, Fraction) else Fraction(value) for value in row] for row in rows]
    width = len(data[0]) if data else 0
    if any(len(row) != width for row in data):
        raise ValueError("Ragged matrix rows")
    matrix = np.empty((len(data), width), dtype=object)
    for i, row in enumerate(data):
        matrix[i, :] = row
    return matrix


def zeros(shape) -> np.ndarray:
    """Object array of exact zeros"""
    array = np.empty(shape, dtype=object)
    array.fill(Fraction(0))
    return array


def identity(n: int) -> np.ndarray:
    matrix = zeros((n, n))
    for i in range(n):
        matrix[i, i] = Fraction(1)
    return matrix


def unit_vector(n: int, index: int) -> np.ndarray:
    vector = zeros(n)
    vector[index] = Fraction(1)
    return vector


def is_zero(array: np.ndarray) -> bool:
    return all(value == 0 for value in np.asarray(array, dtype=object).flat)


def exact_equal(a: np.ndarray, b: np.ndarray) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def is_symmetric(matrix: np.ndarray) -> bool:
    return exact_equal(matrix, matrix.T)


def to_float(array: np.ndarray) -> np.ndarray:
    return np.asarray(array, dtype=object).astype(float)


def _integer_rows(matrix: np.ndarray) -> Tuple[List[List[int]], List[int]]:
    rows, scales = [], []
    for row in matrix:
        scale = 1
        for value in row:
            scale = lcm(scale, Fraction(value).denominator)
        rows.append([int(Fraction(value) * scale) for value in row])
        scales.append(scale)
    return rows, scales


def rref(matrix: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over Q.

    Returns:
        (echelon matrix, pivot column indices)
    """
    m = [[Fraction(value) for value in row] for row in np.asarray(matrix, dtype=object)]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [value / lead for value in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return (fraction_matrix(m) if rows else zeros((0, cols))), pivots


def matrix_rank(matrix: np.ndarray) -> int:
    matrix = np.asarray(matrix, dtype=object)
    if matrix.size == 0:
        return 0
    return len(rref(matrix)[1])


def bareiss_inverse(matrix: np.ndarray) -> np.ndarray:
    """
    Exact inverse by fraction-free elimination.

    Rows are cleared of denominators, the augmented integer matrix [A | I] is
    brought to upper triangular form with Bareiss steps (every intermediate
    entry is a minor, so the divisions are exact), and the triangular system
    is solved by back substitution.

    Args:
        matrix: Square matrix of rationals

    Returns:
        Object array of Fractions

    Raises:
        SingularMatrixError: carrying the rank of the input
    """
    matrix = np.asarray(matrix, dtype=object)
    n, cols = matrix.shape
    if n != cols:
        raise ValueError(f"Cannot invert a {n}x{cols} matrix")

    rows, scales = _integer_rows(matrix)
    a = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(rows)]
    width = 2 * n
    previous = 1
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            raise SingularMatrixError(matrix_rank(matrix), n)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
        for i in range(k + 1, n):
            for j in range(k + 1, width):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // previous
            a[i][k] = 0
        previous = a[k][k]

    solution = [[Fraction(0)] * n for _ in range(n)]
    for col in range(n):
        for i in reversed(range(n)):
            acc = Fraction(a[i][n + col])
            for j in range(i + 1, n):
                acc -= a[i][j] * solution[j][col]
            solution[i][col] = acc / a[i][i]

    # (D M) X = I  =>  M^-1 = X D
    inverse = zeros((n, n))
    for i in range(n):
        for j in range(n):
            inverse[i, j] = solution[i][j] * scales[j]
    return inverse


def primitive_direction(vector: Sequence) -> Tuple[Tuple[int, ...], Fraction]:
    """
    Split v = k * w with w integer, gcd 1, first nonzero entry positive.

    Returns:
        (w, k); raises ValueError for the zero vector
    """
    values = [Fraction(value) for value in vector]
    if all(value == 0 for value in values):
        raise ValueError("Zero vector has no primitive direction")
    common = 1
    for value in values:
        common = lcm(common, value.denominator)
    integers = [int(value * common) for value in values]
    divisor = 0
    for value in integers:
        divisor = gcd(divisor, value)
    first = next(value for value in integers if value != 0)
    if first < 0:
        divisor = -divisor
    primitive = tuple(value // divisor for value in integers)
    return primitive, Fraction(divisor, common)


def polarization(symmetric: np.ndarray) -> List[Tuple[Fraction, np.ndarray]]:
    """
    Write a symmetric matrix S as a weighted sum of rank-one squares.

    Diagonal entries contribute S_ll * e_l e_l^T; each off-diagonal pair
    contributes (S_lm / 2) * ((e_l + e_m)(e_l + e_m)^T - (e_l - e_m)(e_l - e_m)^T).

    Returns:
        List of (weight, vector) with sum(weight * outer(v, v)) == S
    """
    n = symmetric.shape[0]
    terms: List[Tuple[Fraction, np.ndarray]] = []
    for l in range(n):
        if symmetric[l, l] != 0:
            terms.append((Fraction(symmetric[l, l]), unit_vector(n, l)))
    for l in range(n):
        for m in range(l + 1, n):
            if symmetric[l, m] != 0:
                half = Fraction(symmetric[l, m]) / 2
                terms.append((half, unit_vector(n, l) + unit_vector(n, m)))
                terms.append((-half, unit_vector(n, l) - unit_vector(n, m)))
    return terms
