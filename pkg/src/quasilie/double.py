"""The double of a quasi-Lie bialgebra: V (+) V* with its bracket and pairing.

The assembled bracket restricts to the original bracket on V, mixes the two
coadjoint actions on cross terms, and on two dual vectors returns the
associator contraction plus the dual bracket.  The canonical hyperbolic
pairing is invariant exactly when the source structure satisfies its axioms,
and the double carries its own coboundary quasi-Lie bialgebra structure
generated by half the sum of the mixed basis blades.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .brackets import BracketTable, jacobi_defect
from .checks import ValidationReport, format_multivector
from .exterior import (
    Multivector,
    Space,
    contract_by_dual,
    double,
    dual,
    merge_sign,
    pair_double,
    primal,
    wedge,
)
from .quasi import (
    QuasiLieBialgebra,
    Operators,
    cobracket_table_from_values,
    from_r_matrix,
    validate,
)


def hyperbolic_pairing(n: int) -> linalg.Matrix:
    """The fixed 2n x 2n pairing matrix: identity blocks off the diagonal."""
    m = linalg.zeros(2 * n, 2 * n)
    for i in range(n):
        m[i][n + i] = Fraction(1)
        m[n + i][i] = Fraction(1)
    return m


@dataclass(frozen=True)
class DoubleAlgebra:
    """Bracket table on the double plus the canonical pairing."""

    n: int
    names: tuple[str, ...]
    bracket: BracketTable
    pairing: tuple

    def __post_init__(self):
        if self.bracket.space != double(self.n):
            raise ValueError("double bracket must live on the double space")
        if len(self.names) != 2 * self.n:
            raise ValueError("need one name per basis vector of the double")

    @property
    def space(self) -> Space:
        return double(self.n)

    def pairing_matrix(self) -> linalg.Matrix:
        return [list(row) for row in self.pairing]


def build_double(q: QuasiLieBialgebra, check: bool = True) -> DoubleAlgebra:
    """Assemble the double's structure constants from the quadruplet.

    With `check` the source structure must validate first; the corruption
    tests build doubles of broken structures on purpose, so the assembly
    itself never assumes the axioms.
    """
    if check:
        report = validate(q)
        if not report.ok:
            failed = ", ".join(c.name for c in report.failures())
            raise ValueError(f"structure does not validate: {failed}")
    n = q.dim
    ops = Operators(q)
    space = double(n)
    entries = []

    def emit(i: int, j: int, value: Multivector, shift: int):
        for blade, c in value.terms.items():
            entries.append((i, j, (blade.bit_length() - 1) + shift, c))

    for i, j in itertools.combinations(range(2 * n), 2):
        if j < n:
            emit(i, j, q.bracket.bracket_basis(i, j), 0)
        elif i < n:
            x = ops.basis(i)
            xi = ops.dual_basis(j - n)
            emit(i, j, -ops.dual_coad_vector(xi, x), 0)
            emit(i, j, ops.coad_vector(x, xi), n)
        else:
            xi = ops.dual_basis(i - n)
            eta = ops.dual_basis(j - n)
            emit(i, j, ops.associator_pair(xi, eta), 0)
            emit(i, j, ops.gamma_pair(xi, eta), n)
    table = BracketTable.from_entries(space, entries)
    names = q.names + q.dual_names()
    pairing = tuple(tuple(row) for row in hyperbolic_pairing(n))
    return DoubleAlgebra(n, names, table, pairing)


def invariance_defects(d: DoubleAlgebra) -> list[tuple[tuple[int, int, int], Fraction]]:
    """Triples where <[u,v],w> + <v,[u,w]> fails to vanish."""
    space = d.space
    out = []
    for u in range(2 * d.n):
        bu = Multivector.basis(space, u)
        for v in range(2 * d.n):
            bv = Multivector.basis(space, v)
            for w in range(2 * d.n):
                bw = Multivector.basis(space, w)
                value = pair_double(d.bracket.bracket(bu, bv), bw) + pair_double(
                    bv, d.bracket.bracket(bu, bw)
                )
                if value:
                    out.append(((u, v, w), value))
    return out


def verify_invariance(d: DoubleAlgebra) -> bool:
    """True when the canonical pairing is invariant under the bracket."""
    return not invariance_defects(d)


@dataclass(frozen=True)
class ManinPairWitness:
    """A candidate maximal isotropic subalgebra, as basis rows in the double."""

    vectors: tuple

    @classmethod
    def from_rows(cls, rows) -> "ManinPairWitness":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @classmethod
    def primal_subspace(cls, n: int) -> "ManinPairWitness":
        rows = linalg.zeros(n, 2 * n)
        for i in range(n):
            rows[i][i] = Fraction(1)
        return cls.from_rows(rows)

    @classmethod
    def dual_subspace(cls, n: int) -> "ManinPairWitness":
        rows = linalg.zeros(n, 2 * n)
        for i in range(n):
            rows[i][n + i] = Fraction(1)
        return cls.from_rows(rows)

    def matrix(self) -> linalg.Matrix:
        return [list(row) for row in self.vectors]


def _row_to_mv(row, n: int) -> Multivector:
    return Multivector(double(n), {1 << i: c for i, c in enumerate(row) if c})


def _in_span(rows: linalg.Matrix, vec) -> bool:
    base = [list(r) for r in rows]
    return linalg.rank(base + [list(vec)]) == linalg.rank(base)


def verify_manin_pair(d: DoubleAlgebra, witness: ManinPairWitness) -> ValidationReport:
    """Check a subspace for closure, total isotropy and maximal dimension."""
    report = ValidationReport()
    rows = witness.matrix()
    n = d.n
    pairing = d.pairing_matrix()

    def isotropy():
        for a, ra in enumerate(rows):
            for b, rb in enumerate(rows):
                value = sum(
                    (ra[i] * pairing[i][j] * rb[j] for i in range(2 * n) for j in range(2 * n)),
                    Fraction(0),
                )
                yield f"rows ({a},{b})", value, Fraction(0)

    report.record("isotropic", isotropy())

    def closure():
        for a, ra in enumerate(rows):
            ua = _row_to_mv(ra, n)
            for b, rb in enumerate(rows):
                ub = _row_to_mv(rb, n)
                image = d.bracket.bracket(ua, ub)
                vec = [Fraction(0)] * (2 * n)
                for blade, c in image.terms.items():
                    vec[blade.bit_length() - 1] = c
                yield f"rows ({a},{b})", _in_span(rows, vec), True

    report.record("closed-under-bracket", closure())
    report.add(
        "maximal-dimension",
        linalg.rank(rows) == n,
        f"rank {linalg.rank(rows)} of required {n}",
    )
    return report


def canonical_r(d: DoubleAlgebra) -> Multivector:
    """Half the sum of the mixed blades e_i ^ xi^i in the double."""
    half = Fraction(1, 2)
    return Multivector(
        d.space, {(1 << i) | (1 << (d.n + i)): half for i in range(d.n)}
    )


def as_plain_algebra(d: DoubleAlgebra) -> BracketTable:
    """The double's bracket relabelled as a plain algebra on a 2n-dim space."""
    return BracketTable(primal(2 * d.n), d.bracket.constants)


def double_qlb(d: DoubleAlgebra) -> QuasiLieBialgebra:
    """The coboundary quasi-Lie bialgebra the double canonically carries."""
    table = as_plain_algebra(d)
    if jacobi_defect(table):
        raise ValueError("double bracket does not satisfy the Jacobi identity")
    r = Multivector(primal(2 * d.n), dict(canonical_r(d).terms))
    return from_r_matrix(table, r, d.names)


def from_manin_pair(d: DoubleAlgebra, complement: linalg.Matrix) -> QuasiLieBialgebra:
    """Extract the quadruplet induced by an isotropic complement of V.

    The complement rows are re-based so row j pairs canonically with e_j;
    the double bracket of the new dual frame decomposes into the extracted
    associator (V component) and cobracket (complement component).
    """
    n = d.n
    rows = [list(map(Fraction, row)) for row in complement]
    if len(rows) != n or any(len(r) != 2 * n for r in rows):
        raise ValueError(f"complement must be {n} rows of length {2 * n}")
    pairing = d.pairing_matrix()
    for a, ra in enumerate(rows):
        for b, rb in enumerate(rows):
            value = sum(
                (ra[i] * pairing[i][j] * rb[j] for i in range(2 * n) for j in range(2 * n)),
                Fraction(0),
            )
            if value:
                raise ValueError(
                    f"complement is not isotropic: rows ({a},{b}) pair to {value}"
                )
    # <e_i, w_a> is the xi-part of w_a at slot i.
    gram = [[rows[a][n + i] for a in range(n)] for i in range(n)]
    solved_cols = []
    for j in range(n):
        rhs = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        sol = linalg.solve(gram, rhs)
        if sol is None or sol[1]:
            raise ValueError("complement is not transverse to the base subalgebra")
        solved_cols.append(sol[0])
    frame = []
    for j in range(n):
        vec = [Fraction(0)] * (2 * n)
        for a in range(n):
            c = solved_cols[j][a]
            for t in range(2 * n):
                vec[t] += c * rows[a][t]
        frame.append(vec)

    frame_mvs = [_row_to_mv(vec, n) for vec in frame]

    def decompose(mv: Multivector):
        """Coefficients on (e_k) and the new dual frame, via the pairing.

        Both subspaces are isotropic and mutually dual, so <frame_k, mv>
        reads off the e_k coefficient and <e_k, mv> the frame coefficient.
        """
        e_coeffs = [pair_double(frame_mvs[k], mv) for k in range(n)]
        frame_coeffs = [
            pair_double(Multivector.basis(d.space, k), mv) for k in range(n)
        ]
        return e_coeffs, frame_coeffs

    mu_entries = []
    for i, j in itertools.combinations(range(n), 2):
        value = d.bracket.bracket_basis(i, j)
        for blade, c in value.terms.items():
            k = blade.bit_length() - 1
            if k >= n:
                raise ValueError("base subspace is not closed in this double")
            mu_entries.append((i, j, k, c))
    mu = BracketTable.from_entries(primal(n), mu_entries)

    assoc_table = {}
    cobracket_entries = []
    for i, j in itertools.combinations(range(n), 2):
        image = d.bracket.bracket(frame_mvs[i], frame_mvs[j])
        e_part, frame_part = decompose(image)
        for k, c in enumerate(frame_part):
            if c:
                cobracket_entries.append((i, j, k, c))
        assoc_table[(i, j)] = e_part
    cobracket = BracketTable.from_entries(dual(n), cobracket_entries)
    associator = _associator_from_pair_table(assoc_table, n)
    return QuasiLieBialgebra(n, d.names[:n], mu, cobracket, associator)


def _associator_from_pair_table(table: dict, n: int) -> Multivector:
    """Rebuild the grade-3 element whose contractions give the (i,j) -> V table."""
    space = primal(n)
    terms = {}
    for (i, j), e_part in table.items():
        for k, c in enumerate(e_part):
            if not c:
                continue
            if k == i or k == j:
                raise ValueError("pair table is not a contraction of a grade-3 element")
            blade = (1 << i) | (1 << j) | (1 << k)
            # contract_by_dual reverses its grade-2 contractor, hence the
            # extra minus against the plain merge sign.
            sign = -merge_sign((1 << i) | (1 << j), 1 << k)
            value = c * sign
            stored = terms.get(blade)
            if stored is None:
                terms[blade] = value
            elif stored != value:
                raise ValueError("pair table is not a contraction of a grade-3 element")
    mv = Multivector(space, terms)
    for (i, j), e_part in table.items():
        probe = contract_by_dual(
            wedge(Multivector.basis(dual(n), i), Multivector.basis(dual(n), j)), mv
        )
        vec = [Fraction(0)] * n
        for blade, c in probe.terms.items():
            vec[blade.bit_length() - 1] = c
        if vec != list(e_part):
            raise ValueError("pair table is not a contraction of a grade-3 element")
    return mv
