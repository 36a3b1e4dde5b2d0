"""The canonical action of the double on the exterior algebra, and the module
isomorphism from the double's exterior algebra onto endomorphisms.

A double element x + xi acts on Lambda(V) by
    wedge by cobracket(x) + adjoint derivation of x - half-trace scalar
    - contraction by coboundary(xi) + dual coadjoint derivation of xi
    - wedge by (associator contracted by xi) + half-trace scalar,
and conjugation of endomorphisms by this action intertwines, through the
map Q built from contraction by the wedge exponential of the canonical
half-sum element, with the adjoint action on the double's exterior algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import linalg
from .brackets import apply_matrix, schouten
from .checks import ValidationReport
from .double import DoubleAlgebra, as_plain_algebra, build_double, canonical_r
from .exterior import (
    Multivector,
    contract_by_dual,
    contract_double,
    contraction_matrix,
    double,
    dual,
    eps,
    mv_to_vector,
    primal,
    reverse_hat,
    split_double,
)
from .quasi import Characters, Operators, QuasiLieBialgebra, characters


@dataclass(frozen=True)
class DoubleElement:
    """x + xi with x in V and xi in V*, both of grade at most one."""

    x: Multivector
    xi: Multivector

    def __post_init__(self):
        for part in (self.x, self.xi):
            if any(b.bit_count() != 1 for b in part.terms):
                raise ValueError("double element parts must be grade 1")

    @classmethod
    def from_basis(cls, q: QuasiLieBialgebra, index: int) -> "DoubleElement":
        if index < q.dim:
            return cls(Multivector.basis(q.space, index), Multivector.zero(q.dual_space))
        return cls(
            Multivector.zero(q.space), Multivector.basis(q.dual_space, index - q.dim)
        )

    @classmethod
    def from_double_vector(cls, q: QuasiLieBialgebra, mv: Multivector) -> "DoubleElement":
        x = {}
        xi = {}
        for blade, c in mv.terms.items():
            i = blade.bit_length() - 1
            if i < q.dim:
                x[blade] = c
            else:
                xi[1 << (i - q.dim)] = c
        return cls(Multivector(q.space, x), Multivector(q.dual_space, xi))


class RepresentationOperators:
    """Shared matrices for one structure's representation computations."""

    def __init__(self, q: QuasiLieBialgebra):
        self.q = q
        self.ops = Operators(q)
        self.chars = characters(q)
        self.n = q.dim

    def act_primal(self, x: Multivector, y: Multivector) -> Multivector:
        """Action of x in V: cobracket wedge + adjoint derivation - scalar."""
        q, ops = self.q, self.ops
        out = Multivector.zero(q.space)
        for blade, c in x.terms.items():
            i = blade.bit_length() - 1
            term = q.cobracket_value(ops.basis(i)).wedge(y)
            term = term + apply_matrix(ops.ad(i), y)
            trace = self.chars.bracket_character.coefficient(blade)
            term = term - Fraction(trace, 2) * y
            out = out + c * term
        return out

    def act_dual(self, xi: Multivector, y: Multivector) -> Multivector:
        """Action of xi in V*: contraction by its coboundary, dual coadjoint
        derivation, wedge by the contracted associator, and the dual trace
        scalar.  Term signs are pinned by the commutator law against the
        double bracket; with the factor-order contraction convention they
        reduce to the classical bialgebra action when the associator is zero.
        """
        q, ops = self.q, self.ops
        out = Multivector.zero(q.space)
        for blade, c in xi.terms.items():
            i = blade.bit_length() - 1
            base = ops.dual_basis(i)
            cob = apply_matrix(ops.d_bracket, base)
            term = contract_by_dual(cob, y)
            term = term + apply_matrix(ops.dual_coad(i), y)
            term = term + contract_by_dual(base, q.associator).wedge(y)
            trace = self.chars.cobracket_character.coefficient(blade)
            term = term + Fraction(trace, 2) * y
            out = out + c * term
        return out


def rep_action(q: QuasiLieBialgebra, u: DoubleElement, y: Multivector) -> Multivector:
    """Apply the canonical action of a double element to a multivector."""
    rep = RepresentationOperators(q)
    return rep.act_primal(u.x, y) + rep.act_dual(u.xi, y)


def rep_matrix(q: QuasiLieBialgebra, u: DoubleElement, rep: RepresentationOperators | None = None) -> linalg.Matrix:
    """Matrix of the action in the canonical blade order of Lambda(V)."""
    rep = rep or RepresentationOperators(q)
    size = 1 << q.dim
    cols = []
    for b in range(size):
        y = Multivector(q.space, {b: 1})
        cols.append(mv_to_vector(rep.act_primal(u.x, y) + rep.act_dual(u.xi, y)))
    return linalg.from_columns(cols)


def verify_representation(q: QuasiLieBialgebra, d: DoubleAlgebra | None = None) -> ValidationReport:
    """Commutators of the action close onto the double bracket, pairwise."""
    d = d or build_double(q)
    rep = RepresentationOperators(q)
    report = ValidationReport()
    n2 = 2 * q.dim
    matrices = [rep_matrix(q, DoubleElement.from_basis(q, i), rep) for i in range(n2)]

    def commutators():
        for i, j in itertools.combinations(range(n2), 2):
            lhs = linalg.commutator(matrices[i], matrices[j])
            image = d.bracket.bracket_basis(i, j)
            rhs = linalg.zeros(1 << q.dim, 1 << q.dim)
            for blade, c in image.terms.items():
                k = blade.bit_length() - 1
                rhs = linalg.madd(rhs, linalg.mscale(matrices[k], c))
            yield f"({d.names[i]},{d.names[j]})", lhs, rhs

    report.record("representation-commutators", commutators())
    return report


def gamma_action(q: QuasiLieBialgebra, u: DoubleElement, t: linalg.Matrix,
                 rep: RepresentationOperators | None = None) -> linalg.Matrix:
    """Induced action on endomorphisms: the commutator with the action of u."""
    m = rep_matrix(q, u, rep)
    return linalg.commutator(m, t)


def exp_r(d: DoubleAlgebra) -> Multivector:
    """Wedge exponential of the canonical half-sum element, unit term included.

    The series is finite: the k-th power lives in grade 2k and dies past the
    dimension of the base.
    """
    r = canonical_r(d)
    total = Multivector.unit(d.space)
    power = Multivector.unit(d.space)
    for k in range(1, d.n + 1):
        power = power.wedge(r)
        total = total + Fraction(1, factorial(k)) * power
    return total


def q_map(q: QuasiLieBialgebra, u_mv: Multivector, d: DoubleAlgebra | None = None,
          rep_exp: Multivector | None = None) -> linalg.Matrix:
    """The endomorphism attached to an element of the double's exterior algebra.

    Contract the reversed wedge exponential of the canonical element against
    the argument, split the result through Lambda(V) (x) Lambda(V*), and send
    each summand X (x) A to the map Y -> X ^ (contraction by the reversed
    factors of A) Y.  Both reversals are what the factor-order contraction
    convention demands: `contract_by_dual` already reverses its contractor,
    and reversing the exponential termwise is the same as exponentiating the
    negated element.
    """
    d = d or build_double(q)
    if u_mv.space != d.space:
        raise ValueError("q_map argument must live on the double's exterior algebra")
    exp_term = rep_exp if rep_exp is not None else reverse_hat(exp_r(d))
    w = contract_double(exp_term, u_mv)
    size = 1 << q.dim
    total = linalg.zeros(size, size)
    for x, a in split_double(w):
        piece = linalg.matmul(eps(x), contraction_matrix(a, q.space))
        total = linalg.madd(total, piece)
    return total


def q_full_matrix(q: QuasiLieBialgebra, d: DoubleAlgebra | None = None) -> linalg.Matrix:
    """Matrix of the whole map from the double's blades to flattened endos."""
    d = d or build_double(q)
    rep_exp = reverse_hat(exp_r(d))
    size = 1 << (2 * q.dim)
    cols = []
    for b in range(size):
        m = q_map(q, Multivector(d.space, {b: 1}), d, rep_exp)
        cols.append([entry for row in m for entry in row])
    return linalg.from_columns(cols)


def verify_q_isomorphism(q: QuasiLieBialgebra, d: DoubleAlgebra | None = None) -> ValidationReport:
    """Intertwining, bijectivity, and the pure-factor normalisations."""
    d = d or build_double(q)
    rep = RepresentationOperators(q)
    report = ValidationReport()
    n = q.dim
    size = 1 << n
    rep_exp = reverse_hat(exp_r(d))

    report.add(
        "q-unit",
        q_map(q, Multivector.unit(d.space), d, rep_exp) == linalg.identity(size),
    )

    def wedge_side():
        for b in range(size):
            u = Multivector(d.space, {b: 1})
            x = Multivector(q.space, {b: 1})
            yield f"X={bin(b)}", q_map(q, u, d, rep_exp), eps(x)

    report.record("q-on-primal-blades", wedge_side())

    def contraction_side():
        for b in range(size):
            u = Multivector(d.space, {b << n: 1})
            a = Multivector(q.dual_space, {b: 1})
            yield f"A={bin(b)}", q_map(q, u, d, rep_exp), contraction_matrix(a, q.space)

    report.record("q-on-dual-blades", contraction_side())

    plain = as_plain_algebra(d)

    def intertwining():
        basis_mats = [
            rep_matrix(q, DoubleElement.from_basis(q, i), rep) for i in range(2 * n)
        ]
        for i in range(2 * n):
            u_plain = Multivector.basis(plain.space, i)
            for b in range(1 << (2 * n)):
                u_mv = Multivector(d.space, {b: 1})
                q_u = q_map(q, u_mv, d, rep_exp)
                lhs = linalg.commutator(basis_mats[i], q_u)
                moved = schouten(plain, u_plain, Multivector(plain.space, {b: 1}))
                rhs = q_map(q, Multivector(d.space, dict(moved.terms)), d, rep_exp)
                yield f"(u={d.names[i]}, U={bin(b)})", lhs, rhs

    report.record("q-intertwining", intertwining())

    full = q_full_matrix(q, d)
    rk = linalg.rank(full)
    report.add("q-bijective", rk == 1 << (2 * n), f"rank {rk} of {1 << (2 * n)}")
    return report
