"""One-parameter arrangement families over Z[t].

A Family is a 3xn matrix of integer polynomials in one parameter t.  Over
the rational function field the columns define a generic arrangement; at a
specific parameter value (rational or quadratic irrational) columns may
vanish, merge, or lose/gain collinearities.  The degeneracy set collects
every parameter value where the hyperplane count drops (CountDrops) or the
count survives but the intersection lattice changes (LatticeChanges).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arrangement import (
    Arrangement,
    IntersectionLattice,
    build,
    lattice_iso,
)
from .linalg import cross, det3_cols
from .scalars import (
    IntPoly,
    QuadElem,
    RatFunc,
    QQ,
    QQT,
    factor_low_degree,
    poly,
    poly_gcd,
    quad_field,
)

COUNT_DROPS = "CountDrops"
LATTICE_CHANGES = "LatticeChanges"


@dataclass(frozen=True)
class Family:
    """3xn matrix over Z[t]; columns are the covectors of the family."""

    name: str
    columns: tuple  # tuple of 3-tuples of IntPoly

    @property
    def n(self) -> int:
        return len(self.columns)

    def __post_init__(self):
        for idx, col in enumerate(self.columns, start=1):
            if not any(col):
                raise ValueError(f"column {idx} is identically zero")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if not any(cross(self.columns[i], self.columns[j])):
                    raise ValueError(
                        f"columns {i + 1} and {j + 1} are identically "
                        "proportional")


def _cols(*columns):
    out = []
    for col in columns:
        out.append(tuple(
            e if isinstance(e, IntPoly) else poly(e) for e in col))
    return tuple(out)


_T = poly(0, 1)


def family_13() -> Family:
    """The 13-line family: 30 triple points generically, aut order 18."""
    t = _T
    return Family("paper13", _cols(
        (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, -1), (0, 1, -1), (1, 1, -1),
        (1, 0, -1 * t), (0, 1, -1 * t), (1, 1, -1 * t), (1, 1, -1 * t - 1),
        (t, 1, -1 * t), (1, 1 - t, -1), (t - 1, t, -1 * (t * t)),
    ))


def family_15() -> Family:
    """The 15-line family: 39 rank-2 flats generically, aut order 48."""
    t = _T
    return Family("paper15", _cols(
        (1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1), (1, t, 1), (0, 1, 0),
        (2, 1, 1), (t + 1, t, 1), (t + 1, 1, 1), (2 * t, t, 1),
        (1, 1 - t, 1), (1 - 3 * t, t * t - 3 * t + 1, -1 * t),
        (3 * t - 1, t, t), (1 - 3 * t, -1 * (t * t), -1 * t),
        (3 * t - 1, 2 * t - 1, t),
    ))


BUILTIN_FAMILIES = {"paper13": family_13, "paper15": family_15}


def generic_arrangement(f: Family) -> Arrangement:
    """The family as an arrangement over the rational function field."""
    cols = [tuple(RatFunc(p) for p in col) for col in f.columns]
    return build(cols, QQT)


def generic_lattice(f: Family) -> IntersectionLattice:
    return generic_arrangement(f).lattice()


def _domain_for(omega):
    if isinstance(omega, QuadElem):
        return quad_field(omega.d)
    return QQ


def _as_scalar(omega):
    if isinstance(omega, QuadElem):
        return omega
    return Fraction(omega)


@dataclass(frozen=True)
class SpecializationResult:
    """Outcome of evaluating a family at one parameter value."""

    omega: object
    count: int                    # |A_omega| after drops and merges
    arrangement: Arrangement | None   # None when the rank falls below 3
    matches_generic: bool         # full count and lattice isomorphic
    dropped: tuple                # 1-based labels of vanished columns
    merges: tuple                 # tuples of 1-based labels that coincide


def specialize(f: Family, omega) -> SpecializationResult:
    """Evaluate every column at omega and build the specialized arrangement.

    Degenerate outcomes (vanishing or merging columns, changed lattices)
    are reported as data, never as errors.
    """
    omega = _as_scalar(omega)
    dom = _domain_for(omega)
    values = [tuple(p(omega) for p in col) for col in f.columns]
    dropped = tuple(i + 1 for i, col in enumerate(values) if not any(col))
    groups: list[list[int]] = []
    kept_cols = []
    for i, col in enumerate(values):
        if not any(col):
            continue
        for gi, g in enumerate(groups):
            ref = kept_cols[gi]
            if not any(cross(ref, col)):
                g.append(i + 1)
                break
        else:
            groups.append([i + 1])
            kept_cols.append(col)
    merges = tuple(tuple(g) for g in groups if len(g) > 1)
    count = len(kept_cols)
    try:
        arr = build(kept_cols, dom)
    except ValueError:
        arr = None
    matches = False
    if arr is not None and count == f.n:
        matches = lattice_iso(generic_lattice(f), arr.lattice()) is not None
    return SpecializationResult(omega, count, arr, matches, dropped, merges)


@dataclass(frozen=True)
class DegeneracyReport:
    """Classified exceptional set Z of a family.

    rational maps Fraction -> tag; quadratic maps the coefficient tuple of a
    primitive irreducible quadratic in Z[t] (ascending) -> tag; unresolved
    lists coefficient tuples of irreducible factors of degree >= 3 that the
    factorizer does not split.
    """

    rational: dict
    quadratic: dict
    unresolved: tuple

    def values(self):
        return (sorted(self.rational), sorted(self.quadratic))


def _quadratic_root(coeffs) -> QuadElem:
    """One root of c2 t^2 + c1 t + c0 (irreducible over Q) in Q(sqrt d)."""
    c0, c1, c2 = coeffs
    disc = c1 * c1 - 4 * c0 * c2
    import sympy

    d = 1
    square = 1
    for prime, mult in sympy.factorint(disc).items():
        square *= int(prime) ** (mult // 2)
        if mult % 2:
            d *= int(prime)
    return QuadElem(d, Fraction(-c1, 2 * c2), Fraction(square, 2 * c2))


def _candidate_polys(f: Family):
    """Nonconstant loci where a triple becomes dependent or a pair merges."""
    cols = f.columns
    n = f.n
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            minors = [m for m in cross(cols[i], cols[j]) if m]
            g = minors[0]
            for m in minors[1:]:
                g = poly_gcd(g, m)
            if g.degree > 0:
                out.append(g)
            for k in range(j + 1, n):
                det = det3_cols(cols[i], cols[j], cols[k])
                if det and det.degree > 0:
                    out.append(det)
    return out


def degeneracy_set(f: Family) -> DegeneracyReport:
    """Compute and behaviorally verify the exceptional set Z.

    Candidate values come from vanishing loci of column-triple determinants
    and pair-proportionality minors; each candidate is then actually
    specialized, and values whose specialization still matches the generic
    lattice with full count are discarded (the vanishing minor was spurious,
    e.g. a triple that is already dependent generically).
    """
    rational_candidates = set()
    quadratic_candidates = set()
    unresolved = set()
    for p in _candidate_polys(f):
        factors, remainder = factor_low_degree(p)
        for q, _mult in factors:
            if q.degree == 1:
                a, b = q.coeffs
                rational_candidates.add(Fraction(-a, b))
            else:
                quadratic_candidates.add(q.coeffs)
        if remainder.degree > 0:
            unresolved.add(remainder.primitive().coeffs)
    rational = {}
    for omega in rational_candidates:
        tag = _classify(f, omega)
        if tag is not None:
            rational[omega] = tag
    quadratic = {}
    for coeffs in quadratic_candidates:
        tag = _classify(f, _quadratic_root(coeffs))
        if tag is not None:
            quadratic[coeffs] = tag
    return DegeneracyReport(rational, quadratic, tuple(sorted(unresolved)))


def _classify(f: Family, omega):
    spec = specialize(f, omega)
    if spec.count < f.n:
        return COUNT_DROPS
    if not spec.matches_generic:
        return LATTICE_CHANGES
    return None


def vL_membership(f: Family, lattice: IntersectionLattice, omega) -> bool:
    """Is the specialization at omega a realization of the given lattice?"""
    spec = specialize(f, omega)
    if spec.count != f.n or spec.arrangement is None:
        return False
    return lattice_iso(lattice, spec.arrangement.lattice()) is not None


# ---------------------------------------------------------------------------
# Family file format: one line per column, three semicolon-separated integer
# coefficient lists in ascending degree, e.g. "1 -3; 0 1; 0 0 -1" for the
# column (1-3t, t, -t^2).  Blank lines and #-comments are ignored.


def parse_family_text(text: str, name: str = "file") -> Family:
    cols = []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(";")
        if len(parts) != 3:
            raise ValueError(
                f"line {ln}: expected three ';'-separated coefficient lists")
        try:
            col = tuple(
                IntPoly(int(tok) for tok in part.split()) for part in parts)
        except ValueError as exc:
            raise ValueError(f"line {ln}: {exc}") from None
        cols.append(col)
    if not cols:
        raise ValueError("no columns found")
    return Family(name, tuple(cols))


def format_family(f: Family) -> str:
    lines = []
    for col in f.columns:
        lines.append("; ".join(
            " ".join(str(c) for c in (p.coeffs or (0,))) for p in col))
    return "\n".join(lines) + "\n"
