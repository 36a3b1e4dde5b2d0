"""Brackets as structure-constant tables and the operators they generate.

Covers Jacobi testing, adjoint/coadjoint actions and their derivation
extensions, the algebraic Schouten bracket, Chevalley-Eilenberg differentials
with trivial/adjoint/coadjoint coefficients, the degree -1 boundary operator
with its transposed coboundary, and cohomology dimensions over the rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg
from .exterior import (
    Multivector,
    Space,
    SpaceMismatchError,
    blade_indices,
    endomorphism_matrix,
    merge_sign,
)


@dataclass(frozen=True)
class BracketTable:
    """Antisymmetric structure constants c^k_{ij} over a tagged space.

    Only i < j entries are stored; the antisymmetric extension is implied.
    """

    space: Space
    constants: tuple = field(default=())

    def __post_init__(self):
        pairs: dict = {}
        for (i, j, k), c in self.constants:
            pairs.setdefault((i, j), {})[1 << k] = c
        object.__setattr__(self, "_pairs", pairs)

    @classmethod
    def from_entries(cls, space: Space, entries: Iterable) -> "BracketTable":
        """Build from (i, j, k, value) tuples with 0-based indices and i < j."""
        dim = space.dim
        seen = {}
        for i, j, k, value in entries:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise ValueError(f"structure constant index out of range: {(i, j, k)}")
            if i >= j:
                raise ValueError(f"structure constants must have i < j, got {(i, j)}")
            if (i, j, k) in seen:
                raise ValueError(f"duplicate structure constant {(i, j, k)}")
            c = Fraction(value)
            if c:
                seen[(i, j, k)] = c
        return cls(space, tuple(sorted(seen.items())))

    @classmethod
    def zero(cls, space: Space) -> "BracketTable":
        return cls(space, ())

    def entries(self):
        return self.constants

    def as_map(self) -> dict:
        return {key: c for key, c in self.constants}

    def bracket_basis(self, i: int, j: int) -> Multivector:
        if i == j:
            return Multivector.zero(self.space)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        stored = self._pairs.get((i, j))
        if not stored:
            return Multivector.zero(self.space)
        if sign == 1:
            return Multivector._raw(self.space, dict(stored))
        return Multivector._raw(self.space, {b: -c for b, c in stored.items()})

    def bracket(self, x: Multivector, y: Multivector) -> Multivector:
        """Bilinear extension to grade-1 multivectors."""
        if x.space != self.space or y.space != self.space:
            raise SpaceMismatchError("bracket arguments over the wrong space")
        out = Multivector.zero(self.space)
        for bx, cx in x.terms.items():
            i = bx.bit_length() - 1
            if bx != 1 << i:
                raise ValueError("bracket arguments must be grade 1")
            for by, cy in y.terms.items():
                j = by.bit_length() - 1
                if by != 1 << j:
                    raise ValueError("bracket arguments must be grade 1")
                out = out + cx * cy * self.bracket_basis(i, j)
        return out


def jacobi_defect(table: BracketTable) -> dict[tuple[int, int, int], Multivector]:
    """Cyclic Jacobi sums b(b(x_i,x_j),x_k) + cyc for all i < j < k; nonzero only."""
    dim = table.space.dim
    defects = {}
    for i, j, k in itertools.combinations(range(dim), 3):
        total = Multivector.zero(table.space)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            total = total + table.bracket(
                table.bracket_basis(a, b), Multivector.basis(table.space, c)
            )
        if not total.is_zero():
            defects[(i, j, k)] = total
    return defects


def is_lie(table: BracketTable) -> bool:
    return not jacobi_defect(table)


def ad_action(table: BracketTable, x) -> linalg.Matrix:
    """Matrix of y -> b(x, y) on the underlying space."""
    dim = table.space.dim
    if isinstance(x, int):
        x = Multivector.basis(table.space, x)
    cols = []
    for j in range(dim):
        image = table.bracket(x, Multivector.basis(table.space, j))
        col = [Fraction(0)] * dim
        for blade, c in image.terms.items():
            col[blade.bit_length() - 1] = c
        cols.append(col)
    return linalg.from_columns(cols)


def coad_action(table: BracketTable, x) -> linalg.Matrix:
    """Matrix on the dual space with <coad_x xi, y> = -<xi, b(x, y)>."""
    return linalg.mneg(linalg.transpose(ad_action(table, x)))


def derivation_matrix(m: linalg.Matrix, space: Space) -> linalg.Matrix:
    """Extend a linear map of the base space to a degree-0 derivation of its
    exterior algebra."""

    def act(mv: Multivector) -> Multivector:
        out = Multivector.zero(space)
        for blade, c in mv.terms.items():
            for pos, i in enumerate(blade_indices(blade)):
                rest = blade & ~(1 << i)
                img = Multivector(space, {1 << row: m[row][i] for row in range(len(m)) if m[row][i]})
                sign = -1 if pos & 1 else 1
                out = out + (sign * c) * img.wedge(Multivector(space, {rest: 1}))
        return out

    return endomorphism_matrix(space, act)


def apply_matrix(m: linalg.Matrix, mv: Multivector) -> Multivector:
    """Apply an exterior-algebra matrix (canonical blade order) to a multivector."""
    out: dict[int, Fraction] = {}
    for blade, c in mv.terms.items():
        for row in range(len(m)):
            v = m[row][blade]
            if v:
                s = out.get(row, 0) + c * v
                if s:
                    out[row] = s
                else:
                    out.pop(row, None)
    return Multivector._raw(mv.space, out)


def schouten(table: BracketTable, x: Multivector, y: Multivector) -> Multivector:
    """Algebraic Schouten bracket: the biderivation extension of the table.

    On decomposables it is the double sum over deleted factors,
    [x_1^..^x_m, y_1^..^y_k] = sum_{a,b} (-1)^(a+b) b(x_a, y_b) ^ X_a ^ Y_b,
    which reproduces the bracket in grade 1, kills scalars, and satisfies
    graded antisymmetry and the graded Leibniz rule.
    """
    if x.space != table.space or y.space != table.space:
        raise SpaceMismatchError("schouten arguments over the wrong space")
    pairs = table._pairs
    out: dict[int, Fraction] = {}
    for bs, cs in x.terms.items():
        xs = blade_indices(bs)
        for bt, ct in y.terms.items():
            ys = blade_indices(bt)
            base = cs * ct
            for a, ia in enumerate(xs):
                rx = bs & ~(1 << ia)
                for b, jb in enumerate(ys):
                    if ia == jb:
                        continue
                    flip = ia > jb
                    head = pairs.get((jb, ia) if flip else (ia, jb))
                    if not head:
                        continue
                    ry = bt & ~(1 << jb)
                    if rx & ry:
                        continue
                    rest = rx | ry
                    sign = merge_sign(rx, ry)
                    if (a + b) & 1:
                        sign = -sign
                    if flip:
                        sign = -sign
                    coeff = base * sign
                    for bh, ch in head.items():
                        if bh & rest:
                            continue
                        key = bh | rest
                        s = out.get(key, 0) + coeff * ch * merge_sign(bh, rest)
                        if s:
                            out[key] = s
                        else:
                            out.pop(key, None)
    return Multivector._raw(table.space, out)


def boundary_operator(table: BracketTable) -> linalg.Matrix:
    """Degree -1 operator on the exterior algebra of the table's space.

    Sends x_1^..^x_k to sum_{i<j} (-1)^(i+j) b(x_i, x_j) ^ (blade with both
    factors removed); vanishes on grades 0 and 1.
    """

    def act(mv: Multivector) -> Multivector:
        out = Multivector.zero(table.space)
        for blade, c in mv.terms.items():
            idx = blade_indices(blade)
            for a in range(len(idx)):
                for b in range(a + 1, len(idx)):
                    head = table.bracket_basis(idx[a], idx[b])
                    if head.is_zero():
                        continue
                    rest = blade & ~(1 << idx[a]) & ~(1 << idx[b])
                    sign = -1 if (a + b) & 1 else 1
                    out = out + (sign * c) * head.wedge(Multivector(table.space, {rest: 1}))
        return out

    return endomorphism_matrix(table.space, act)


def d_operator(table: BracketTable) -> linalg.Matrix:
    """Degree +1 coboundary on the exterior algebra of the dual space.

    Transpose of `boundary_operator` under the duality pairing; for a bracket
    on V it is the trivial-coefficient Chevalley-Eilenberg differential on
    Lambda(V*), and its grade-1 block is the dualised cobracket map.
    """
    return linalg.transpose(boundary_operator(table))


# -- Chevalley-Eilenberg cochains with module coefficients ---------------


@dataclass(frozen=True)
class CoefficientModule:
    """How the acting algebra moves cochain values.

    kind 'trivial' acts by zero on grade-0 scalars of the value space;
    'adjoint' acts by the Schouten extension of the bracket on its own
    exterior powers; 'coadjoint' acts through the derivation extension of the
    negative-transposed adjoint on the dual exterior algebra.
    """

    kind: str
    table: BracketTable | None = None
    grade: int = 0

    def value_space(self) -> Space:
        if self.kind == "trivial":
            return self.table.space
        if self.kind == "adjoint":
            return self.table.space
        if self.kind == "coadjoint":
            return self.table.space.dual()
        raise ValueError(f"unknown module kind {self.kind!r}")

    def action(self, index: int, value: Multivector) -> Multivector:
        if self.kind == "trivial":
            return Multivector.zero(value.space)
        if self.kind == "adjoint":
            return schouten(self.table, Multivector.basis(self.table.space, index), value)
        if self.kind == "coadjoint":
            m = derivation_matrix(coad_action(self.table, index), value.space)
            return apply_matrix(m, value)
        raise ValueError(f"unknown module kind {self.kind!r}")


def trivial_coefficients(table: BracketTable) -> CoefficientModule:
    return CoefficientModule("trivial", table, 0)


def adjoint_coefficients(table: BracketTable, grade: int) -> CoefficientModule:
    return CoefficientModule("adjoint", table, grade)


def coadjoint_coefficients(table: BracketTable, grade: int) -> CoefficientModule:
    return CoefficientModule("coadjoint", table, grade)


@dataclass(frozen=True)
class Cochain:
    """Alternating multilinear map on basis tuples with module values."""

    degree: int
    module: CoefficientModule
    values: tuple = ()

    @classmethod
    def from_values(cls, degree: int, module: CoefficientModule, values: Mapping) -> "Cochain":
        cleaned = []
        for key, mv in sorted(values.items()):
            key = tuple(key)
            if len(key) != degree or list(key) != sorted(set(key)):
                raise ValueError(f"cochain keys must be ascending {degree}-tuples, got {key}")
            if not mv.is_zero():
                cleaned.append((key, mv))
        return cls(degree, module, tuple(cleaned))

    def value_space(self) -> Space:
        return self.module.value_space()

    def evaluate(self, args: tuple[int, ...]) -> Multivector:
        """Evaluate on an arbitrary index tuple (antisymmetric extension)."""
        if len(args) != self.degree:
            raise ValueError("wrong number of arguments")
        if len(set(args)) != len(args):
            return Multivector.zero(self.value_space())
        inversions = sum(
            1
            for i in range(len(args))
            for j in range(i + 1, len(args))
            if args[i] > args[j]
        )
        key = tuple(sorted(args))
        for stored, mv in self.values:
            if stored == key:
                return -mv if inversions & 1 else mv
        return Multivector.zero(self.value_space())


def ce_differential(table: BracketTable, cochain: Cochain) -> Cochain:
    """Chevalley-Eilenberg coboundary with the cochain's module action.

    (d a)(x_0..x_k) = sum_i (-1)^i x_i.a(..omit i..)
                    + sum_{i<j} (-1)^(i+j) a(b(x_i,x_j), ..omit i,j..).
    """
    k = cochain.degree
    dim = table.space.dim
    if k + 1 > dim:
        raise ValueError("cochain degree overflow")
    space = cochain.value_space()
    values = {}
    for key in itertools.combinations(range(dim), k + 1):
        total = Multivector.zero(space)
        for i in range(k + 1):
            rest = key[:i] + key[i + 1:]
            acted = cochain.module.action(key[i], cochain.evaluate(rest))
            total = total + (-1) ** i * acted
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                head = table.bracket_basis(key[i], key[j])
                rest = tuple(key[t] for t in range(k + 1) if t not in (i, j))
                for blade, c in head.terms.items():
                    idx = blade.bit_length() - 1
                    total = total + ((-1) ** (i + j) * c) * cochain.evaluate((idx,) + rest)
        if not total.is_zero():
            values[key] = total
    return Cochain.from_values(k + 1, cochain.module, values)


def _grade_blades(dim: int, k: int) -> list[int]:
    return [b for b in range(1 << dim) if b.bit_count() == k]


def grade_block(matrix: linalg.Matrix, dim: int, k_from: int, k_to: int) -> linalg.Matrix:
    """Extract the block of an exterior-algebra matrix between two grades."""
    rows = _grade_blades(dim, k_to)
    cols = _grade_blades(dim, k_from)
    return [[matrix[r][c] for c in cols] for r in rows]


def cohomology_dims(table: BracketTable) -> tuple[int, ...]:
    """Trivial-coefficient cohomology dimensions from ranks of the coboundary."""
    dim = table.space.dim
    d = d_operator(table)
    ranks = [linalg.rank(grade_block(d, dim, k, k + 1)) for k in range(dim)]
    ranks.append(0)
    out = []
    for k in range(dim + 1):
        space_dim = len(_grade_blades(dim, k))
        below = ranks[k - 1] if k else 0
        out.append(space_dim - ranks[k] - below)
    return tuple(out)
