"""Independent re-derivations used to pin expected values in the tests.

Everything here reaches its result by a different route than the library:
recursive axiom-driven expansion instead of the double-sum formula, explicit
permutation determinants instead of sparse dot products, adjointness solves
instead of blade rules, and raw table scans instead of operator algebra.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from quasilie.brackets import BracketTable
from quasilie.exterior import (
    Multivector,
    blade_indices,
    dual,
    primal,
    reverse_hat,
    wedge,
)


def perm_sign(perm) -> int:
    inv = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inv & 1 else 1


def det_pair(a: Multivector, x: Multivector) -> Fraction:
    """Duality pairing evaluated as an explicit determinant sum."""
    total = Fraction(0)
    for ba, ca in a.terms.items():
        rows = blade_indices(ba)
        for bx, cx in x.terms.items():
            cols = blade_indices(bx)
            if len(rows) != len(cols):
                continue
            det = Fraction(0)
            for perm in itertools.permutations(range(len(cols))):
                prod = 1
                for row, col in zip(rows, (cols[p] for p in perm)):
                    if row != col:
                        prod = 0
                        break
                if prod:
                    det += perm_sign(perm)
            total += ca * cx * det
    return total


def schouten_oracle(table: BracketTable, x: Multivector, y: Multivector) -> Multivector:
    """Recursive graded-Leibniz/antisymmetry expansion of the bracket."""
    space = table.space
    out = Multivector.zero(space)
    for bs, cs in x.terms.items():
        for bt, ct in y.terms.items():
            term = _schouten_blades(table, blade_indices(bs), blade_indices(bt))
            out = out + (cs * ct) * term
    return out


def _schouten_blades(table, xs, ys):
    space = table.space
    if not xs or not ys:
        return Multivector.zero(space)
    if len(xs) == 1 and len(ys) == 1:
        return table.bracket_basis(xs[0], ys[0])
    if len(ys) > 1:
        # [X, y ^ Z] = [X, y] ^ Z + (-1)^(p*1) y ^ [X, Z] with p = |X| - 1.
        head, rest = ys[0], ys[1:]
        sign = -1 if (len(xs) - 1) & 1 else 1
        first = _schouten_blades(table, xs, [head]).wedge(
            Multivector.from_factors(space, rest)
        )
        second = Multivector.basis(space, head).wedge(
            _schouten_blades(table, xs, rest)
        )
        return first + sign * second
    # |Y| = 1 and |X| > 1: graded antisymmetry with q = 0 gives [X, y] = -[y, X].
    return -1 * _schouten_blades(table, ys, xs)


def contract_by_dual_oracle(a: Multivector, x: Multivector) -> Multivector:
    """Solve <B, i_A X> = <reverse(A) ^ B, X> coefficientwise over dual blades."""
    n = x.space.dim
    hat = reverse_hat(a)
    terms = {}
    for blade in range(1 << n):
        probe = Multivector(dual(n), {blade: 1})
        value = det_pair(wedge(hat, probe), x)
        if value:
            terms[blade] = value
    return Multivector(x.space, terms)


def contract_by_primal_oracle(x: Multivector, a: Multivector) -> Multivector:
    """Solve <i_X A, Y> = <A, reverse(X) ^ Y> coefficientwise over primal blades."""
    n = a.space.dim
    hat = reverse_hat(x)
    terms = {}
    for blade in range(1 << n):
        probe = Multivector(primal(n), {blade: 1})
        value = det_pair(a, wedge(hat, probe))
        if value:
            terms[blade] = value
    return Multivector(a.space, terms)


def trace_oracle(table: BracketTable, index: int) -> Fraction:
    """Trace of the adjoint action read off the raw constants."""
    total = Fraction(0)
    for j in range(table.space.dim):
        if j == index:
            continue
        value = table.bracket_basis(index, j).coefficient(1 << j)
        total += value
    return total


def jacobi_defect_oracle(table: BracketTable):
    """Cyclic sums evaluated from scratch, without the library sweep."""
    dim = table.space.dim
    out = {}
    for i, j, k in itertools.combinations(range(dim), 3):
        total = Multivector.zero(table.space)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = table.bracket_basis(a, b)
            for blade, coeff in inner.terms.items():
                total = total + coeff * table.bracket_basis(blade.bit_length() - 1, c)
        if not total.is_zero():
            out[(i, j, k)] = total
    return out


def cojacobi_defect_oracle(q):
    """Co-Jacobi defect of the cobracket via the Jacobi sweep of its dual table."""
    return jacobi_defect_oracle(q.cobracket)
