"""Exact sparse exterior algebra over the rationals.

Basis blades are bitmasks over 0..dim-1, kept in canonical ascending order
with reordering signs absorbed into coefficients.  A multivector is a sparse
blade -> Fraction map tagged with the space it lives over: a primal space V,
its dual V*, or the double V (+) V* carrying the canonical hyperbolic pairing
<x + xi, y + eta> = <xi, y> + <x, eta>.

Everything here is pure: operations never mutate their arguments, and built
multivectors are treated as immutable, so values can be shared freely.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

Scalar = Fraction

PRIMAL = "primal"
DUAL = "dual"
DOUBLE = "double"


class SpaceMismatchError(ValueError):
    """Operands live over incompatible spaces."""


@dataclass(frozen=True)
class Space:
    """Tag identifying the space a multivector lives over."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (PRIMAL, DUAL, DOUBLE):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("negative dimension")

    @property
    def dim(self) -> int:
        return 2 * self.n if self.kind == DOUBLE else self.n

    def dual(self) -> "Space":
        if self.kind == PRIMAL:
            return Space(DUAL, self.n)
        if self.kind == DUAL:
            return Space(PRIMAL, self.n)
        # The double is identified with its own dual through the pairing.
        return self

    def __repr__(self):
        return f"{self.kind}({self.n})"


def primal(n: int) -> Space:
    return Space(PRIMAL, n)


def dual(n: int) -> Space:
    return Space(DUAL, n)


def double(n: int) -> Space:
    return Space(DOUBLE, n)


def blade_indices(blade: int) -> list[int]:
    """Ascending basis indices of a blade bitmask."""
    return [i for i in range(blade.bit_length()) if blade >> i & 1]


def blade_grade(blade: int) -> int:
    return blade.bit_count()


def merge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation of two disjoint ascending blades.

    Counts the transpositions needed to move every factor of `b` into place
    past the larger factors of `a`.
    """
    inversions = 0
    t = b
    while t:
        low = t & -t
        inversions += (a >> low.bit_length()).bit_count()
        t ^= low
    return -1 if inversions & 1 else 1


def _as_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class Multivector:
    """Immutable sparse element of the exterior algebra over a tagged space."""

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms=()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        cleaned: dict[int, Fraction] = {}
        limit = 1 << space.dim
        for blade, coeff in items:
            c = _as_scalar(coeff)
            if not c:
                continue
            if not 0 <= blade < limit:
                raise ValueError(f"blade {bin(blade)} out of range for {space}")
            s = cleaned.get(blade, 0) + c
            if s:
                cleaned[blade] = s
            else:
                cleaned.pop(blade, None)
        self.space = space
        self.terms = cleaned

    # -- constructors -------------------------------------------------

    @classmethod
    def _raw(cls, space: Space, terms: dict) -> "Multivector":
        """Trusted constructor: terms must be a fresh zero-free Fraction dict."""
        mv = object.__new__(cls)
        mv.space = space
        mv.terms = terms
        return mv

    @classmethod
    def zero(cls, space: Space) -> "Multivector":
        return cls._raw(space, {})

    @classmethod
    def scalar(cls, space: Space, value) -> "Multivector":
        return cls(space, {0: value})

    @classmethod
    def unit(cls, space: Space) -> "Multivector":
        return cls(space, {0: 1})

    @classmethod
    def basis(cls, space: Space, index: int) -> "Multivector":
        if not 0 <= index < space.dim:
            raise ValueError(f"basis index {index} out of range for {space}")
        return cls(space, {1 << index: 1})

    @classmethod
    def from_factors(cls, space: Space, indices: Iterable[int], coeff=1) -> "Multivector":
        """Blade from a factor sequence in any order; repeats give zero."""
        blade = 0
        sign = 1
        for i in indices:
            bit = 1 << i
            if blade & bit:
                return cls.zero(space)
            sign *= merge_sign(blade, bit)
            blade |= bit
        return cls(space, {blade: sign * _as_scalar(coeff)})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, blade: int) -> Fraction:
        return self.terms.get(blade, Fraction(0))

    def scalar_part(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    def grades(self) -> list[int]:
        return sorted({blade_grade(b) for b in self.terms})

    def grade_part(self, k: int) -> "Multivector":
        return Multivector(self.space, {b: c for b, c in self.terms.items() if blade_grade(b) == k})

    def is_homogeneous(self, k: int) -> bool:
        return all(blade_grade(b) == k for b in self.terms)

    def items(self):
        return sorted(self.terms.items())

    # -- arithmetic ---------------------------------------------------

    def _require_same_space(self, other: "Multivector"):
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space} vs {other.space}")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._require_same_space(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            s = out.get(b, 0) + c
            if s:
                out[b] = s
            else:
                out.pop(b, None)
        return Multivector._raw(self.space, out)

    def __sub__(self, other: "Multivector") -> "Multivector":
        self._require_same_space(other)
        out = dict(self.terms)
        for b, c in other.terms.items():
            s = out.get(b, 0) - c
            if s:
                out[b] = s
            else:
                out.pop(b, None)
        return Multivector._raw(self.space, out)

    def __neg__(self) -> "Multivector":
        return Multivector._raw(self.space, {b: -c for b, c in self.terms.items()})

    def __mul__(self, value) -> "Multivector":
        c = _as_scalar(value)
        if not c:
            return Multivector._raw(self.space, {})
        return Multivector._raw(self.space, {b: c * v for b, v in self.terms.items()})

    __rmul__ = __mul__

    def wedge(self, other: "Multivector") -> "Multivector":
        self._require_same_space(other)
        out: dict[int, Fraction] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                if a & b:
                    continue
                c = ca * cb * merge_sign(a, b)
                key = a | b
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Multivector._raw(self.space, out)

    def __eq__(self, other):
        return (
            isinstance(other, Multivector)
            and self.space == other.space
            and self.terms == other.terms
        )

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return f"Multivector({self.space}, 0)"
        parts = " + ".join(f"{c}*{bin(b)}" for b, c in self.items())
        return f"Multivector({self.space}, {parts})"


def wedge(a: Multivector, b: Multivector) -> Multivector:
    """Exterior product; graded-commutative, associative, bilinear."""
    return a.wedge(b)


def _dual_pair_spaces(a: Space, b: Space) -> bool:
    return a.n == b.n and {a.kind, b.kind} == {PRIMAL, DUAL}


def pair(a: Multivector, x: Multivector) -> Fraction:
    """Determinant duality pairing between a space and its dual.

    On blades <xi_1^...^xi_m, x_1^...^x_k> = delta_{mk} det(<xi_i, x_j>);
    in matched ascending bases this reduces to a sparse dot product.
    """
    if not _dual_pair_spaces(a.space, x.space):
        raise SpaceMismatchError(f"cannot pair {a.space} with {x.space}")
    total = Fraction(0)
    small, big = (a.terms, x.terms) if len(a.terms) <= len(x.terms) else (x.terms, a.terms)
    for blade, c in small.items():
        other = big.get(blade)
        if other is not None:
            total += c * other
    return total


def _contract_terms(contractor: Mapping[int, Fraction], target: Mapping[int, Fraction]) -> dict[int, Fraction]:
    """Blade rule for all interior products: i_{B_T} B_S = sign(T, S\\T) B_{S\\T}."""
    out: dict[int, Fraction] = {}
    for t, ct in contractor.items():
        for s, cs in target.items():
            if t & ~s:
                continue
            rest = s & ~t
            c = ct * cs * merge_sign(t, rest)
            acc = out.get(rest, 0) + c
            if acc:
                out[rest] = acc
            else:
                out.pop(rest, None)
    return out


def contract_by_primal(x: Multivector, a: Multivector) -> Multivector:
    """i_X A on the dual exterior algebra: <i_X A, Y> = <A, reverse(X) ^ Y>.

    On grade-1 contractors this is exactly the transpose of left exterior
    multiplication; higher grades compose in factor order,
    i_{X ^ Y} = i_X i_Y, which is the convention every operator identity in
    this package is consistent with (see `contract_by_dual`).
    """
    if x.space.kind != PRIMAL or a.space != x.space.dual():
        raise SpaceMismatchError(f"contract_by_primal got {x.space}, {a.space}")
    return Multivector._raw(a.space, _contract_terms(reverse_hat(x).terms, a.terms))


def contract_by_dual(a: Multivector, x: Multivector) -> Multivector:
    """i_A X on the primal exterior algebra: <B, i_A X> = <reverse(A) ^ B, X>.

    Contracting by A = xi_1 ^ ... ^ xi_k applies i_{xi_1} first, so the
    composition runs in factor order: i_{A ^ B} = i_A i_B.  On grade-2
    contractors this is the sign that makes the evaluation of a grade-3
    element as an antisymmetric map (xi, eta) -> i_{xi ^ eta} (...) agree
    with the bracket it induces on the double; grade 1 is unaffected.
    """
    if a.space.kind != DUAL or x.space != a.space.dual():
        raise SpaceMismatchError(f"contract_by_dual got {a.space}, {x.space}")
    return Multivector._raw(x.space, _contract_terms(reverse_hat(a).terms, x.terms))


def _flat_terms(terms: Mapping[int, Fraction], n: int) -> dict[int, Fraction]:
    """Lower indices through the hyperbolic pairing of the double.

    Each basis vector maps to the coordinate functional of its pairing
    partner (e_i <-> xi^i); a blade picks up the sign of re-sorting the
    swapped factor list.
    """
    mask = (1 << n) - 1
    out: dict[int, Fraction] = {}
    for blade, c in terms.items():
        low = blade & mask
        high = blade >> n
        swapped = (low << n) | high
        # Sorting sign: pairs (i in low-part, j in high-part) swap relative
        # order exactly when both are present, i.e. popcount(low)*popcount(high)
        # transpositions.
        inv = low.bit_count() * high.bit_count()
        sign = -1 if inv & 1 else 1
        acc = out.get(swapped, 0) + sign * c
        if acc:
            out[swapped] = acc
        else:
            out.pop(swapped, None)
    return out


def pair_double(u: Multivector, v: Multivector) -> Fraction:
    """Canonical pairing of the double extended to blades by determinants."""
    if u.space.kind != DOUBLE or u.space != v.space:
        raise SpaceMismatchError(f"pair_double got {u.space}, {v.space}")
    flat = _flat_terms(u.terms, u.space.n)
    total = Fraction(0)
    for blade, c in flat.items():
        other = v.terms.get(blade)
        if other is not None:
            total += c * other
    return total


def contract_double(w: Multivector, u: Multivector) -> Multivector:
    """Interior product of the double against itself via its pairing.

    Defined by <V, i_W U> = <reverse(W) ^ V, U> with the blade pairing of
    `pair_double`, matching the factor-order composition of
    `contract_by_dual`; on pure factors it restricts to the plain
    primal/dual contractions.
    """
    if w.space.kind != DOUBLE or w.space != u.space:
        raise SpaceMismatchError(f"contract_double got {w.space}, {u.space}")
    return Multivector._raw(
        u.space, _contract_terms(_flat_terms(reverse_hat(w).terms, w.space.n), u.terms)
    )


def reverse_hat(a: Multivector) -> Multivector:
    """Reverse the factor order of every blade: grade k picks up (-1)^(k(k-1)/2)."""
    out = {}
    for b, c in a.terms.items():
        k = blade_grade(b)
        out[b] = -c if (k * (k - 1) // 2) & 1 else c
    return Multivector._raw(a.space, out)


def split_double(u: Multivector) -> list[tuple[Multivector, Multivector]]:
    """Factor a double multivector through Lambda(V) (x) Lambda(V*).

    Ascending double blades already list primal indices before dual ones, so
    the normal form carries no extra sign; terms are grouped by their primal
    part and returned in deterministic blade order.
    """
    if u.space.kind != DOUBLE:
        raise SpaceMismatchError(f"split_double got {u.space}")
    n = u.space.n
    mask = (1 << n) - 1
    grouped: dict[int, dict[int, Fraction]] = {}
    for blade, c in u.terms.items():
        g = blade & mask
        d = blade >> n
        grouped.setdefault(g, {})[d] = grouped.get(g, {}).get(d, Fraction(0)) + c
    out = []
    for g in sorted(grouped):
        x = Multivector(primal(n), {g: 1})
        a = Multivector(dual(n), grouped[g])
        if not a.is_zero():
            out.append((x, a))
    return out


def join_double(pairs: Iterable[tuple[Multivector, Multivector]], n: int) -> Multivector:
    """Inverse of `split_double`: wedge each (X, A) back in normal order."""
    total = Multivector.zero(double(n))
    for x, a in pairs:
        xd = Multivector(double(n), dict(x.terms))
        ad = Multivector(double(n), {b << n: c for b, c in a.terms.items()})
        total = total + xd.wedge(ad)
    return total


def mv_to_vector(mv: Multivector) -> list[Fraction]:
    """Coefficient column in canonical blade order (bitmask ascending)."""
    size = 1 << mv.space.dim
    vec = [Fraction(0)] * size
    for b, c in mv.terms.items():
        vec[b] = c
    return vec


def vector_to_mv(space: Space, vec) -> Multivector:
    return Multivector(space, {b: c for b, c in enumerate(vec) if c})


def endomorphism_matrix(space: Space, fn: Callable[[Multivector], Multivector]) -> list[list[Fraction]]:
    """Matrix of a linear map on the exterior algebra in canonical blade order."""
    size = 1 << space.dim
    cols = []
    for b in range(size):
        image = fn(Multivector(space, {b: 1}))
        cols.append(mv_to_vector(image))
    return [[cols[c][r] for c in range(size)] for r in range(size)]


def eps(x: Multivector) -> list[list[Fraction]]:
    """Matrix of left exterior multiplication Y -> X ^ Y."""
    return endomorphism_matrix(x.space, lambda y: x.wedge(y))


def contraction_matrix(a: Multivector, target_space: Space) -> list[list[Fraction]]:
    """Matrix of the interior product by `a` acting on `target_space`."""
    if a.space.kind == DUAL and target_space == a.space.dual():
        return endomorphism_matrix(target_space, lambda y: contract_by_dual(a, y))
    if a.space.kind == PRIMAL and target_space == a.space.dual():
        return endomorphism_matrix(target_space, lambda y: contract_by_primal(a, y))
    if a.space.kind == DOUBLE and target_space == a.space:
        return endomorphism_matrix(target_space, lambda y: contract_double(a, y))
    raise SpaceMismatchError(f"no contraction of {a.space} on {target_space}")


# -- tensor utilities (for the alternation-based axioms) ----------------

Tensor = dict


def tensor_scale(t: Tensor, value) -> Tensor:
    c = _as_scalar(value)
    if not c:
        return {}
    return {k: c * v for k, v in t.items()}


def tensor_add(a: Tensor, b: Tensor) -> Tensor:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def alt(t: Tensor, arity: int | None = None) -> Tensor:
    """Signed sum over all slot permutations, without normalisation."""
    if arity is None:
        arities = {len(k) for k in t}
        if not arities:
            return {}
        if len(arities) != 1:
            raise ValueError("mixed-arity tensor")
        arity = arities.pop()
    if arity not in (2, 3, 4):
        raise ValueError(f"alternation unsupported for arity {arity}")
    out: Tensor = {}
    for key, c in t.items():
        if len(key) != arity:
            raise ValueError("mixed-arity tensor")
        for perm in itertools.permutations(range(arity)):
            sign = _permutation_sign(perm)
            new = tuple(key[p] for p in perm)
            s = out.get(new, 0) + sign * c
            if s:
                out[new] = s
            else:
                out.pop(new, None)
    return out


def _permutation_sign(perm) -> int:
    inv = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inv & 1 else 1


def tensor_of(mv: Multivector) -> Tensor:
    """Embed a homogeneous multivector as the full signed sum of slot orders."""
    grades = mv.grades()
    if not grades:
        return {}
    if len(grades) != 1:
        raise ValueError("tensor embedding needs a homogeneous multivector")
    out: Tensor = {}
    for blade, c in mv.terms.items():
        idx = blade_indices(blade)
        for perm in itertools.permutations(range(len(idx))):
            sign = _permutation_sign(perm)
            key = tuple(idx[p] for p in perm)
            s = out.get(key, 0) + sign * c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def multivector_of_alternating(t: Tensor, space: Space, arity: int) -> Multivector:
    """Inverse of `tensor_of` on alternating tensors; rejects non-alternating input."""
    terms: dict[int, Fraction] = {}
    for key, c in t.items():
        if len(key) != arity:
            raise ValueError("mixed-arity tensor")
        if list(key) == sorted(key):
            if len(set(key)) != arity:
                raise ValueError("tensor has a repeated-index diagonal entry")
            blade = 0
            for i in key:
                blade |= 1 << i
            terms[blade] = c
    mv = Multivector(space, terms)
    if tensor_of(mv) != dict(t):
        raise ValueError("tensor is not alternating")
    return mv


def substitute_first_slot(t: Tensor, image: Callable[[int], Tensor]) -> Tensor:
    """Replace slot 0 of every key by the tensor `image(index)`, splicing slots."""
    out: Tensor = {}
    for key, c in t.items():
        head, rest = key[0], key[1:]
        for sub, cs in image(head).items():
            new = sub + rest
            s = out.get(new, 0) + c * cs
            if s:
                out[new] = s
            else:
                out.pop(new, None)
    return out


def derivation_on_tensor(t: Tensor, matrix) -> Tensor:
    """Act on every slot by a square matrix, summing the results."""
    out: Tensor = {}
    for key, c in t.items():
        for slot, idx in enumerate(key):
            for row, coeff in enumerate(col_of(matrix, idx)):
                if not coeff:
                    continue
                new = key[:slot] + (row,) + key[slot + 1:]
                s = out.get(new, 0) + c * coeff
                if s:
                    out[new] = s
                else:
                    out.pop(new, None)
    return out


def col_of(matrix, j):
    return [row[j] for row in matrix]
