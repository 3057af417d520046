"""Central rank-3 arrangements and their intersection lattices.

An arrangement is stored as the 3 x n matrix of normal covectors over an
exact scalar domain; hyperplanes carry labels 1..n in column order.  The
lattice of a rank-3 central arrangement is captured by its rank-2 flats
(multiple points) together with hyperplane incidences.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .scalars import Domain, Fraction as _Fraction, QQ, domain_of


class ArrangementError(ValueError):
    pass


class ZeroColumnError(ArrangementError):
    def __init__(self, index: int):
        super().__init__(f"column {index} is zero")
        self.index = index


class ProportionalColumnsError(ArrangementError):
    def __init__(self, i: int, j: int):
        super().__init__(f"columns {i} and {j} are proportional")
        self.i, self.j = i, j


class NotEssentialError(ArrangementError):
    def __init__(self, msg="arrangement does not have rank 3"):
        super().__init__(msg)


class UnknownLabelError(ArrangementError):
    def __init__(self, h):
        super().__init__(f"no hyperplane labeled {h}")


def _proportional(u, v) -> bool:
    return (not u[0] * v[1] - u[1] * v[0]
            and not u[0] * v[2] - u[2] * v[0]
            and not u[1] * v[2] - u[2] * v[1])


class Arrangement:
    """Essential central arrangement of n hyperplanes in rank 3.

    Immutable after construction; build through :func:`build`.
    """

    __slots__ = ("domain", "columns", "_lattice")

    def __init__(self, domain: Domain, columns):
        self.domain = domain
        self.columns = tuple(tuple(c) for c in columns)
        self._lattice = None

    @property
    def n(self) -> int:
        return len(self.columns)

    def labels(self):
        return range(1, self.n + 1)

    def column(self, h: int):
        if not 1 <= h <= self.n:
            raise UnknownLabelError(h)
        return self.columns[h - 1]

    def lattice(self) -> "IntersectionLattice":
        if self._lattice is None:
            self._lattice = _compute_lattice(self)
        return self._lattice

    def char_poly(self) -> "CharPoly":
        return char_poly(self.lattice())

    def __repr__(self):
        return f"<Arrangement n={self.n} over {self.domain.name}>"


def build(columns, domain: Domain | None = None) -> Arrangement:
    """Validate covector columns and build the arrangement.

    Columns may contain ints/Fractions (coerced into the domain).  The
    default domain is QQ.
    """
    cols = [tuple(c) for c in columns]
    if domain is None:
        domain = QQ
        for c in cols:
            for x in c:
                if not isinstance(x, (int, _Fraction)):
                    domain = domain_of(x)
                    break
    coerced = []
    for c in cols:
        if len(c) != 3:
            raise ArrangementError("columns must have exactly 3 entries")
        cc = []
        for x in c:
            if isinstance(x, int):
                cc.append(domain.from_int(x))
            elif isinstance(x, _Fraction) and not isinstance(domain.zero, _Fraction):
                cc.append(domain.from_fraction(x))
            else:
                cc.append(x)
        coerced.append(tuple(cc))
    for i, c in enumerate(coerced, start=1):
        if not any(c):
            raise ZeroColumnError(i)
    for i in range(len(coerced)):
        for j in range(i + 1, len(coerced)):
            if _proportional(coerced[i], coerced[j]):
                raise ProportionalColumnsError(i + 1, j + 1)
    if not _has_rank3(coerced):
        raise NotEssentialError()
    return Arrangement(domain, coerced)


def _has_rank3(cols) -> bool:
    if len(cols) < 3:
        return False
    c0 = cols[0]
    for j in range(1, len(cols)):
        if _proportional(c0, cols[j]):
            continue
        for k in range(1, len(cols)):
            if k == j:
                continue
            if linalg.det3_cols(c0, cols[j], cols[k]):
                return True
        # all other columns lie in the span of c0 and cols[j]
        return False
    return False


@dataclass(frozen=True)
class IntersectionLattice:
    """Rank-2 flats of a rank-3 arrangement, with incidences.

    ``flats`` holds frozensets of hyperplane labels (1-based), in the
    deterministic order of first appearance over lexicographic pair scan.
    ``per_hyperplane[h-1]`` lists incident flat indices (0-based, sorted).
    """

    n: int
    flats: tuple
    per_hyperplane: tuple

    def multiplicity(self, flat_index: int) -> int:
        return len(self.flats[flat_index])

    def multiplicities(self) -> tuple:
        """Sorted multiset of flat multiplicities."""
        return tuple(sorted(len(f) for f in self.flats))

    def flat_of_pair(self, i: int, j: int) -> int:
        return _pair_table(self)[(i, j) if i < j else (j, i)]

    def hyperplane_profile(self, h: int) -> tuple:
        """Sorted multiset of multiplicities of the flats through h."""
        return tuple(sorted(len(self.flats[f]) for f in self.per_hyperplane[h - 1]))

    def validate(self):
        seen = {}
        for idx, f in enumerate(self.flats):
            if len(f) < 2:
                raise ArrangementError(f"flat {idx} has fewer than 2 hyperplanes")
            fl = sorted(f)
            for a in range(len(fl)):
                for b in range(a + 1, len(fl)):
                    key = (fl[a], fl[b])
                    if key in seen:
                        raise ArrangementError(f"pair {key} covered twice")
                    seen[key] = idx
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                if (i, j) not in seen:
                    raise ArrangementError(f"pair {(i, j)} not covered")
        for h in range(1, self.n + 1):
            s = sum(len(self.flats[f]) - 1 for f in self.per_hyperplane[h - 1])
            if s != self.n - 1:
                raise ArrangementError(
                    f"degree identity fails at hyperplane {h}: {s} != {self.n - 1}")


_PAIR_TABLES: dict = {}


def _pair_table(lat: IntersectionLattice) -> dict:
    key = id(lat)
    tab = _PAIR_TABLES.get(key)
    if tab is None or tab[0] is not lat:
        d = {}
        for idx, f in enumerate(lat.flats):
            fl = sorted(f)
            for a in range(len(fl)):
                for b in range(a + 1, len(fl)):
                    d[(fl[a], fl[b])] = idx
        _PAIR_TABLES[key] = (lat, d)
        tab = _PAIR_TABLES[key]
    return tab[1]


def _compute_lattice(arr: Arrangement) -> IntersectionLattice:
    cols = arr.columns
    n = arr.n
    assigned = [[None] * n for _ in range(n)]
    flats = []
    for i in range(n):
        for j in range(i + 1, n):
            if assigned[i][j] is not None:
                continue
            members = [i, j]
            for k in range(n):
                if k == i or k == j:
                    continue
                if not linalg.det3_cols(cols[i], cols[j], cols[k]):
                    members.append(k)
            members = sorted(set(members))
            idx = len(flats)
            flats.append(frozenset(m + 1 for m in members))
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    assigned[members[a]][members[b]] = idx
    per_h = []
    for h in range(n):
        incident = sorted(idx for idx, f in enumerate(flats) if h + 1 in f)
        per_h.append(tuple(incident))
    lat = IntersectionLattice(n, tuple(flats), tuple(per_h))
    lat.validate()
    return lat


@dataclass(frozen=True)
class CharPoly:
    """Monic cubic characteristic polynomial, coefficients ascending."""

    coeffs: tuple  # (c0, c1, c2, 1)

    def __call__(self, x):
        c0, c1, c2, c3 = self.coeffs
        return ((c3 * x + c2) * x + c1) * x + c0

    def exponents(self):
        """Roots as a sorted (1, e, f) triple of nonnegative ints, or None.

        For a free arrangement these are the degrees of a homogeneous
        basis of the derivation module; the cubic always has the root 1.
        """
        c0, c1, c2, _ = self.coeffs
        if self(1) != 0:
            return None
        # divide by (x - 1): x^2 + bx + c
        b = c2 + 1
        c = c1 + b
        disc = b * b - 4 * c
        if disc < 0:
            return None
        s = _isqrt_exact(disc)
        if s is None:
            return None
        e = (-b - s) // 2
        f = (-b + s) // 2
        if e + f != -b or e * f != c or e < 0:
            return None
        return tuple(sorted((1, e, f)))

    def reduced(self):
        """Coefficients (c, b, 1) of chi(x)/(x-1), monic quadratic."""
        c0, c1, c2, _ = self.coeffs
        b = c2 + 1
        c = c1 + b
        return (c, b, 1)

    def __str__(self):
        c0, c1, c2, _ = self.coeffs
        s = "x^3"
        for c, mono in ((c2, "x^2"), (c1, "x"), (c0, "")):
            if c == 0:
                continue
            sign = " - " if c < 0 else " + "
            mag = abs(c)
            if mono and mag == 1:
                s += f"{sign}{mono}"
            else:
                s += f"{sign}{mag}{'*' + mono if mono else ''}"
        return s

    def factored_string(self):
        exps = self.exponents()
        if exps is None:
            c, b, _ = self.reduced()
            bs = f" - {-b}" if b < 0 else f" + {b}"
            cs = f" - {-c}" if c < 0 else f" + {c}"
            return f"(x - 1)*(x^2{bs}*x{cs})"
        parts = []
        for e in sorted(set(exps)):
            k = exps.count(e)
            base = f"(x - {e})" if e else "x"
            parts.append(base + (f"^{k}" if k > 1 else ""))
        return "*".join(parts)


def _isqrt_exact(n: int):
    from math import isqrt
    s = isqrt(n)
    return s if s * s == n else None


def char_poly(lat: IntersectionLattice) -> CharPoly:
    """Characteristic polynomial from Mobius values on the lattice.

    mu(V) = 1, mu(H) = -1, mu(X) = m_X - 1 for rank-2 flats; the value at
    the center is forced by the zero-sum over the lattice, giving chi(1)=0.
    """
    n = lat.n
    a = sum(len(f) - 1 for f in lat.flats)
    mu0 = -(1 - n + a)
    return CharPoly((mu0, a, -n, 1))


def restriction_profile(arr: Arrangement, h: int):
    """(|A^H|, multiset of flat multiplicities along H)."""
    if not 1 <= h <= arr.n:
        raise UnknownLabelError(h)
    lat = arr.lattice()
    mults = tuple(sorted(len(lat.flats[f]) for f in lat.per_hyperplane[h - 1]))
    return len(mults), mults


def delete(arr: Arrangement, h: int):
    """Remove hyperplane h; returns (arrangement, old-label -> new-label map).

    Raises NotEssentialError if the deletion has rank < 3.
    """
    if not 1 <= h <= arr.n:
        raise UnknownLabelError(h)
    cols = [c for i, c in enumerate(arr.columns) if i != h - 1]
    if not _has_rank3(cols):
        raise NotEssentialError(f"deleting hyperplane {h} drops the rank below 3")
    mapping = {}
    new = 1
    for old in range(1, arr.n + 1):
        if old == h:
            continue
        mapping[old] = new
        new += 1
    return Arrangement(arr.domain, cols), mapping


def deletion_is_essential(arr: Arrangement, h: int) -> bool:
    cols = [c for i, c in enumerate(arr.columns) if i != h - 1]
    return _has_rank3(cols)


def _iso_backtrack(l1: IntersectionLattice, l2: IntersectionLattice, find_all,
                   fixed_first=False):
    """Backtracking hyperplane-bijection search between two lattices.

    Yields mappings as dicts.  Prunes with per-hyperplane invariants and
    incremental pair/flat consistency.
    """
    if l1.n != l2.n or len(l1.flats) != len(l2.flats):
        return
    if l1.multiplicities() != l2.multiplicities():
        return
    n = l1.n
    prof1 = {h: l1.hyperplane_profile(h) for h in range(1, n + 1)}
    prof2 = {h: l2.hyperplane_profile(h) for h in range(1, n + 1)}
    if sorted(prof1.values()) != sorted(prof2.values()):
        return
    t1, t2 = _pair_table(l1), _pair_table(l2)
    # order source hyperplanes, rarest invariant first
    from collections import Counter
    cnt = Counter(prof1.values())
    order = sorted(range(1, n + 1), key=lambda h: (cnt[prof1[h]], h))
    mapping = {}
    used = set()
    flat_map = {}
    flat_map_rev = {}

    def extend(pos):
        if pos == n:
            yield dict(mapping)
            return
        h = order[pos]
        for cand in range(1, n + 1):
            if cand in used or prof2[cand] != prof1[h]:
                continue
            new_flats = []
            ok = True
            for j in mapping:
                f1 = t1[(h, j) if h < j else (j, h)]
                g = mapping[j]
                f2 = t2[(cand, g) if cand < g else (g, cand)]
                m1 = flat_map.get(f1)
                if m1 is None:
                    if f2 in flat_map_rev or \
                            len(l1.flats[f1]) != len(l2.flats[f2]):
                        ok = False
                        break
                    flat_map[f1] = f2
                    flat_map_rev[f2] = f1
                    new_flats.append(f1)
                elif m1 != f2:
                    ok = False
                    break
            if ok:
                mapping[h] = cand
                used.add(cand)
                yield from extend(pos + 1)
                del mapping[h]
                used.discard(cand)
            for f1 in new_flats:
                del flat_map_rev[flat_map.pop(f1)]

    yield from extend(0)


def _check_iso(l1, l2, mapping) -> bool:
    image = {frozenset(mapping[h] for h in f) for f in l1.flats}
    return image == set(l2.flats)


def lattice_iso(l1: IntersectionLattice, l2: IntersectionLattice):
    """A hyperplane bijection inducing a lattice isomorphism, or None."""
    for mapping in _iso_backtrack(l1, l2, find_all=False):
        assert _check_iso(l1, l2, mapping)
        return mapping
    return None


def _perm_tuple(mapping, n):
    return tuple(mapping[h] for h in range(1, n + 1))


def _compose(p, q):
    # (p o q)(i) = p[q[i]]
    return tuple(p[q[i] - 1] for i in range(len(p)))


def aut_order(lat: IntersectionLattice):
    """(order of Aut, generator permutations as 1-based tuples)."""
    auts = []
    for mapping in _iso_backtrack(lat, lat, find_all=True):
        auts.append(_perm_tuple(mapping, lat.n))
    identity = tuple(range(1, lat.n + 1))
    generators = []
    closure = {identity}
    for a in sorted(auts):
        if a in closure:
            continue
        generators.append(a)
        frontier = [a]
        while frontier:
            nxt = []
            for g in frontier:
                for h in list(closure):
                    for prod in (_compose(g, h), _compose(h, g)):
                        if prod not in closure:
                            closure.add(prod)
                            nxt.append(prod)
            frontier = nxt
    assert len(closure) == len(auts)
    return len(auts), generators


_CANON_CACHE: dict = {}


def canonical_key(lat: IntersectionLattice) -> str:
    """Canonical string, equal for two lattices iff they are isomorphic.

    Encodes, under a lexicographically minimal hyperplane ordering, each
    hyperplane's invariant profile followed by block labels of the pairs
    it forms with earlier hyperplanes (blocks = rank-2 flats, labeled in
    order of first appearance).  Minimality is found by backtracking that
    keeps only candidates achieving the minimal next chunk.
    """
    cached = _CANON_CACHE.get(id(lat))
    if cached is not None and cached[0] is lat:
        return cached[1]
    n = lat.n
    tab = _pair_table(lat)
    prof = {h: lat.hyperplane_profile(h) for h in range(1, n + 1)}

    def chunk_for(cand, prefix, flat_labels):
        labels = []
        local = {}
        for j in prefix:
            f = tab[(cand, j) if cand < j else (j, cand)]
            lab = flat_labels.get(f)
            if lab is None:
                lab = local.get(f)
            if lab is None:
                lab = len(flat_labels) + len(local)
                local[f] = lab
            labels.append(lab)
        return (prof[cand], tuple(labels)), local

    best: list = [None]

    def search(prefix, flat_labels, acc):
        if len(prefix) == n:
            enc = tuple(acc)
            if best[0] is None or enc < best[0]:
                best[0] = enc
            return
        candidates = []
        for cand in range(1, n + 1):
            if cand in prefix:
                continue
            ch, local = chunk_for(cand, prefix, flat_labels)
            candidates.append((ch, cand, local))
        mn = min(c[0] for c in candidates)
        # prefix-prune against the best known complete encoding
        pos = len(prefix)
        if best[0] is not None:
            trial = tuple(acc) + (mn,)
            if trial > best[0][:pos + 1]:
                return
        for ch, cand, local in candidates:
            if ch != mn:
                continue
            fl = dict(flat_labels)
            fl.update(local)
            acc.append(ch)
            search(prefix + [cand], fl, acc)
            acc.pop()

    search([], {}, [])
    key = repr(best[0])
    _CANON_CACHE[id(lat)] = (lat, key)
    return key


def format_lattice(lat: IntersectionLattice) -> str:
    """The sequence-of-lists text form: one line of flat numbers per line.

    Flats are numbered 1..k in order of first appearance scanning
    hyperplanes 1..n.
    """
    numbering = {}
    lines = []
    for h in range(1, lat.n + 1):
        nums = []
        for f in lat.per_hyperplane[h - 1]:
            if f not in numbering:
                numbering[f] = len(numbering) + 1
            nums.append(numbering[f])
        lines.append("[" + ", ".join(str(x) for x in sorted(nums)) + "]")
    return "\n".join(lines) + "\n"


def parse_lattice_listing(text: str) -> IntersectionLattice:
    """Parse the sequence-of-lists format back into a lattice."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not (line.startswith("[") and line.endswith("]")):
            raise ArrangementError(f"line {lineno}: expected a [..] list")
        body = line[1:-1].strip()
        try:
            rows.append([int(x) for x in body.split(",")] if body else [])
        except ValueError as exc:
            raise ArrangementError(f"line {lineno}: {exc}") from None
    n = len(rows)
    members: dict[int, set] = {}
    for h, row in enumerate(rows, start=1):
        for f in row:
            members.setdefault(f, set()).add(h)
    flats = []
    index_of = {}
    for h, row in enumerate(rows, start=1):
        for f in row:
            if f not in index_of:
                index_of[f] = len(flats)
                flats.append(frozenset(members[f]))
    per_h = tuple(tuple(sorted(index_of[f] for f in row)) for row in rows)
    lat = IntersectionLattice(n, tuple(flats), per_h)
    lat.validate()
    return lat
