"""Structure-constant documents, the example catalog, and the run pipelines.

Documents are JSON with 1-based indices and exact rational value strings
("p/q" or an integer string).  A document either states the cobracket and
associator explicitly or supplies a grade-2 element r for the coboundary
construction; supplying both is an error.  Serialisation is canonical:
sorted keys, sorted entries, two-space indent, trailing newline, so
identical inputs always produce byte-identical files and reports.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .brackets import BracketTable, grade_block, jacobi_defect
from .checks import CheckResult, ValidationReport, format_multivector
from .double import (
    DoubleAlgebra,
    ManinPairWitness,
    build_double,
    canonical_r,
    double_qlb,
    verify_invariance,
    verify_manin_pair,
)
from .exterior import Multivector, blade_indices, dual, primal
from .quasi import (
    QuasiLieBialgebra,
    bv_prerequisite,
    characters,
    from_quasitriangular,
    from_r_matrix,
    laplacian,
    laplacian_report,
    relations_suite,
    validate,
)
from .representation import verify_q_isomorphism, verify_representation


class DocumentError(ValueError):
    """Malformed input document (syntax, indices, values, or exclusivity)."""


@dataclass(frozen=True)
class InputDocument:
    """Parsed and validated structure-constant document (0-based indices)."""

    dim: int
    basis: tuple[str, ...]
    mu: tuple = ()
    gamma: tuple = ()
    phi: tuple = ()
    r: tuple = ()

    @property
    def mode(self) -> str:
        return "exact" if self.r else "explicit"


def _parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(f"{where}: boolean is not a rational value")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"{where}: malformed rational {value!r} ({exc})") from exc
    raise DocumentError(f"{where}: value must be an integer or 'p/q' string")


def _parse_entries(raw, width: int, key_width: int, dim: int, label: str):
    """Validate entry lists; the first `key_width` indices must be strictly
    ascending (mirror entries of antisymmetric tables are rejected, not
    reconciled)."""
    if not isinstance(raw, list):
        raise DocumentError(f"{label} must be a list of entries")
    seen = set()
    out = []
    for pos, entry in enumerate(raw):
        where = f"{label}[{pos}]"
        if not isinstance(entry, list) or len(entry) != width + 1:
            raise DocumentError(f"{where}: expected [indices..., value] of length {width + 1}")
        idx = entry[:width]
        for i in idx:
            if not isinstance(i, int) or isinstance(i, bool):
                raise DocumentError(f"{where}: indices must be integers")
            if not 1 <= i <= dim:
                raise DocumentError(f"{where}: index {i} out of range 1..{dim}")
        head = list(idx[:key_width])
        if head != sorted(set(head)):
            raise DocumentError(
                f"{where}: leading indices must be strictly ascending; "
                f"redundant mirror entries are rejected"
            )
        key = tuple(idx)
        if key in seen:
            raise DocumentError(f"{where}: duplicate entry for indices {key}")
        seen.add(key)
        value = _parse_rational(entry[width], where)
        if value:
            out.append(tuple(i - 1 for i in idx) + (value,))
    return tuple(sorted(out))


def parse(text: str) -> InputDocument:
    """Parse a JSON document into a validated InputDocument."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object")
    known = {"dim", "basis", "mu", "gamma", "phi", "r"}
    unknown = set(raw) - known
    if unknown:
        raise DocumentError(f"unknown fields: {sorted(unknown)}")
    dim = raw.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError("dim must be a positive integer")
    basis = raw.get("basis")
    if basis is None:
        basis = [f"e{i + 1}" for i in range(dim)]
    if (
        not isinstance(basis, list)
        or len(basis) != dim
        or any(not isinstance(b, str) or not b for b in basis)
        or len(set(basis)) != dim
    ):
        raise DocumentError("basis must list dim distinct nonempty names")
    mu = _parse_entries(raw.get("mu", []), 3, 2, dim, "mu")
    has_explicit = "gamma" in raw or "phi" in raw
    has_exact = "r" in raw
    if has_explicit and has_exact:
        raise DocumentError("exactly one of {gamma+phi, r} may be present")
    gamma = _parse_entries(raw.get("gamma", []), 3, 2, dim, "gamma")
    phi = _parse_entries(raw.get("phi", []), 3, 3, dim, "phi")
    r = _parse_entries(raw.get("r", []), 2, 2, dim, "r")
    return InputDocument(dim, tuple(basis), mu, gamma, phi, r)


def document_to_dict(doc: InputDocument) -> dict:
    out = {"dim": doc.dim, "basis": list(doc.basis)}
    out["mu"] = [[i + 1, j + 1, k + 1, str(v)] for i, j, k, v in doc.mu]
    if doc.mode == "exact":
        out["r"] = [[i + 1, j + 1, str(v)] for i, j, v in doc.r]
    else:
        out["gamma"] = [[i + 1, j + 1, k + 1, str(v)] for i, j, k, v in doc.gamma]
        out["phi"] = [[i + 1, j + 1, k + 1, str(v)] for i, j, k, v in doc.phi]
    return out


def serialize(doc: InputDocument) -> str:
    """Canonical byte-stable rendering of a document."""
    return json.dumps(document_to_dict(doc), sort_keys=True, indent=2) + "\n"


def build_structure(doc: InputDocument) -> QuasiLieBialgebra:
    """Instantiate the quadruplet a document describes."""
    space = primal(doc.dim)
    mu = BracketTable.from_entries(space, [(i, j, k, v) for i, j, k, v in doc.mu])
    if doc.mode == "exact":
        r = Multivector(space, {(1 << i) | (1 << j): v for i, j, v in doc.r})
        return from_r_matrix(mu, r, doc.basis)
    gamma = BracketTable.from_entries(
        dual(doc.dim), [(i, j, k, v) for i, j, k, v in doc.gamma]
    )
    phi = Multivector(
        space, {(1 << i) | (1 << j) | (1 << k): v for i, j, k, v in doc.phi}
    )
    return QuasiLieBialgebra(doc.dim, doc.basis, mu, gamma, phi)


def document_of_structure(q: QuasiLieBialgebra) -> InputDocument:
    """Explicit-mode document for a built structure."""
    mu = tuple(sorted((i, j, k, c) for (i, j, k), c in q.bracket.entries()))
    gamma = tuple(sorted((i, j, k, c) for (i, j, k), c in q.cobracket.entries()))
    phi = []
    for blade, c in q.associator.items():
        i, j, k = blade_indices(blade)
        phi.append((i, j, k, c))
    return InputDocument(q.dim, q.names, mu, gamma, tuple(sorted(phi)), ())


# -- catalog ----------------------------------------------------------------

SL2_MU = ((0, 1, 1, Fraction(2)), (0, 2, 2, Fraction(-2)), (1, 2, 0, Fraction(1)))


def _catalog_abelian2() -> InputDocument:
    return InputDocument(2, ("e1", "e2"))


def _catalog_heisenberg3() -> InputDocument:
    return InputDocument(
        3, ("x", "y", "z"), ((0, 1, 2, Fraction(1)),), r=((0, 1, Fraction(1)),)
    )


def _catalog_sl2_bialgebra() -> InputDocument:
    gamma = ((0, 1, 1, Fraction(1)), (0, 2, 2, Fraction(1)))
    return InputDocument(3, ("h", "e", "f"), SL2_MU, gamma, ())


def _catalog_sl2_exact() -> InputDocument:
    return InputDocument(3, ("h", "e", "f"), SL2_MU, r=((1, 2, Fraction(1)),))


def _catalog_sl2_quasitriangular() -> InputDocument:
    # r = 3/2 e(x)f + 1/2 f(x)e + 1/2 h(x)h: the symmetric part is the
    # invariant Casimir-normalised tensor, the antisymmetric part is e^f/2.
    mu = BracketTable.from_entries(primal(3), SL2_MU)
    r_tensor = {
        (1, 2): Fraction(3, 2),
        (2, 1): Fraction(1, 2),
        (0, 0): Fraction(1, 2),
    }
    q = from_quasitriangular(mu, r_tensor, ("h", "e", "f"))
    return document_of_structure(q)


_CATALOG = {
    "abelian2": _catalog_abelian2,
    "heisenberg3": _catalog_heisenberg3,
    "sl2-bialgebra": _catalog_sl2_bialgebra,
    "sl2-exact-r": _catalog_sl2_exact,
    "sl2-quasitriangular": _catalog_sl2_quasitriangular,
}


def catalog_names() -> tuple[str, ...]:
    return tuple(sorted(_CATALOG))


def example_catalog(name: str) -> InputDocument:
    try:
        builder = _CATALOG[name]
    except KeyError:
        raise DocumentError(
            f"unknown example {name!r}; choose from {', '.join(catalog_names())}"
        ) from None
    return builder()


# -- report helpers ----------------------------------------------------------


def _mv_entries(mv: Multivector, names) -> list:
    out = []
    for blade, c in mv.items():
        out.append(
            {
                "blade": [names[i] for i in blade_indices(blade)],
                "value": str(c),
            }
        )
    return out


def _matrix_strings(m: linalg.Matrix) -> list:
    return [[str(x) for x in row] for row in m]


def _report_checks(*reports: ValidationReport) -> list:
    out = []
    for report in reports:
        out.extend(c.to_dict() for c in report.checks)
    return out


# -- pipelines ---------------------------------------------------------------


def run_check(doc: InputDocument, max_dim: int = 5) -> dict:
    """Axioms, derived relations, Laplacian laws, and computed artifacts."""
    if doc.dim > max_dim:
        raise DocumentError(
            f"dimension {doc.dim} exceeds the cap {max_dim}; raise --max-dim to override"
        )
    q = build_structure(doc)
    axioms = validate(q)
    reports = [axioms]
    if axioms.ok:
        reports.append(relations_suite(q))
        reports.append(laplacian_report(q))
    chars = characters(q)
    lap = laplacian(q)
    blocks = {}
    for k in range(q.dim + 1):
        blocks[f"grade_{k}"] = _matrix_strings(grade_block(lap, q.dim, k, k))
    bv = bv_prerequisite(q) if axioms.ok else None
    report = {
        "input": {"dim": doc.dim, "basis": list(doc.basis), "mode": doc.mode},
        "checks": _report_checks(*reports),
        "artifacts": {
            "bracket_character": _mv_entries(chars.bracket_character, [n + "*" for n in q.names]),
            "cobracket_character": _mv_entries(chars.cobracket_character, q.names),
            "laplacian": blocks,
            "bv_solution": (
                None
                if bv is None
                else {
                    "x0": _mv_entries(bv.x0, q.names),
                    "nullspace_dim": len(bv.solution_offsets),
                }
            ),
        },
        "ok": all(r.ok for r in reports),
    }
    return report


def run_double(doc: InputDocument, max_dim: int = 5) -> tuple[dict, InputDocument]:
    """Build the double, verify it, and emit its own document.

    The emitted document carries the double's structure constants together
    with the canonical half-sum element, so re-checking it exercises the
    coboundary construction end to end.
    """
    base = run_check(doc, max_dim)
    if not base["ok"]:
        raise DocumentError("input does not pass `check`; double not built")
    q = build_structure(doc)
    d = build_double(q)
    defects = jacobi_defect(d.bracket)
    invariant = verify_invariance(d)
    dq = double_qlb(d)
    dq_report = validate(dq)
    manin = verify_manin_pair(d, ManinPairWitness.primal_subspace(q.dim))
    checks = [
        CheckResult("double-jacobi", not defects).to_dict(),
        CheckResult("double-pairing-invariant", invariant).to_dict(),
        CheckResult("double-structure-validates", dq_report.ok).to_dict(),
        CheckResult("double-base-manin-pair", manin.ok).to_dict(),
    ]
    mu_entries = tuple(sorted((i, j, k, c) for (i, j, k), c in d.bracket.entries()))
    r_entries = tuple(
        sorted(
            (blade_indices(b)[0], blade_indices(b)[1], c)
            for b, c in canonical_r(d).items()
        )
    )
    emitted = InputDocument(2 * q.dim, d.names, mu_entries, r=r_entries)
    table_listing = [
        [d.names[i], d.names[j], format_multivector(d.bracket.bracket_basis(i, j), d.names)]
        for i, j in itertools.combinations(range(2 * q.dim), 2)
    ]
    report = {
        "input": base["input"],
        "checks": base["checks"] + checks,
        "artifacts": {
            "double_dim": 2 * q.dim,
            "double_table": table_listing,
        },
        "ok": base["ok"] and not defects and invariant and dq_report.ok and manin.ok,
    }
    return report, emitted


def run_rep_verify(doc: InputDocument, max_dim: int = 5) -> dict:
    """Representation law, intertwining, and exact rank of the module map."""
    base = run_check(doc, max_dim)
    if not base["ok"]:
        raise DocumentError("input does not pass `check`; representation not verified")
    q = build_structure(doc)
    d = build_double(q)
    rep_report = verify_representation(q, d)
    iso_report = verify_q_isomorphism(q, d)
    rank_detail = iso_report.get("q-bijective").detail
    report = {
        "input": base["input"],
        "checks": base["checks"] + _report_checks(rep_report, iso_report),
        "artifacts": {"q_rank": rank_detail},
        "ok": base["ok"] and rep_report.ok and iso_report.ok,
    }
    return report


def report_to_json(report: dict) -> str:
    """Canonical byte-stable rendering of a report."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
