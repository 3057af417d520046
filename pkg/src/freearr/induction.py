"""Inductive and recursive freeness of rank-3 arrangements.

Addition-Deletion bookkeeping for triples (A, A\\H, A^H), the quick
restriction-size obstruction to inductive freeness, a memoized decision
procedure for inductive freeness with certificate chains, a bounded
bidirectional search refuting recursive freeness, and the deletion-pair
consistency check (a common root of the reduced characteristic polynomials
forces both members of the pair to be free).

In rank 3 a restriction A^H is a rank-2 arrangement of s = |A^H| lines,
always free with exponents [1, s-1].  The Addition-Deletion theorem then
pins every candidate exponent triple: if A has n hyperplanes, the only
bookkeeping compatible with deleting H is

    exp A  = [1, s-1, n-s],    exp A\\H = [1, s-1, n-s-1].
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .arrangement import (
    Arrangement,
    NotEssentialError,
    build,
    canonical_key,
    delete,
    deletion_is_essential,
    restriction_profile,
)
from .freeness import Free, Inconclusive, NotFree, decide_freeness, state_key
from .linalg import cross


class TheoremViolationError(AssertionError):
    """Two Addition-Deletion statements hold but the third fails.

    This would falsify the implementation (the theorem is proved), so it is
    raised as a hard error rather than reported.
    """


def _multiset(values) -> tuple:
    return tuple(sorted(values))


# ---------------------------------------------------------------------------
# Triple bookkeeping


@dataclass(frozen=True)
class TripleVerdict:
    """Which statements of the Addition-Deletion theorem hold at (A, A', A'')."""

    label: int
    candidate_exponents: tuple       # [1, s-1, n-s] forced by |A^H| = s
    deletion_exponents: tuple        # [1, s-1, n-s-1]
    restriction_exponents: tuple     # [1, s-1]
    full_holds: bool | None          # A free with the candidate exponents
    deletion_holds: bool | None      # A\H free with the deletion exponents
    restriction_holds: bool          # A^H free with [1, s-1]: always true
    inconclusive: bool = False

    @property
    def applies(self) -> bool:
        return bool(self.full_holds and self.deletion_holds
                    and self.restriction_holds)


def _statement_holds(verdict, expected: tuple):
    """Does decide_freeness confirm freeness with exactly these exponents?"""
    if isinstance(verdict, Free):
        return _multiset(verdict.exponents) == expected
    if isinstance(verdict, NotFree):
        return False
    return None  # Inconclusive


def triple_check(arr: Arrangement, h: int) -> TripleVerdict:
    """Evaluate the Addition-Deletion statements for the triple at h.

    Raises TheoremViolationError if exactly two of the three statements
    hold, which the theorem forbids.
    """
    if not deletion_is_essential(arr, h):
        raise NotEssentialError(
            f"deleting hyperplane {h} drops the rank below 3")
    n = arr.n
    s, _ = restriction_profile(arr, h)
    cand = _multiset((1, s - 1, n - s))
    cand_del = _multiset((1, s - 1, n - s - 1))
    sub, _ = delete(arr, h)
    full = _statement_holds(decide_freeness(arr), cand)
    deleted = _statement_holds(decide_freeness(sub), cand_del)
    verdict = TripleVerdict(
        label=h,
        candidate_exponents=cand,
        deletion_exponents=cand_del,
        restriction_exponents=(1, s - 1),
        full_holds=full,
        deletion_holds=deleted,
        restriction_holds=True,
        inconclusive=full is None or deleted is None,
    )
    if not verdict.inconclusive:
        statements = (full, deleted, True)
        if sum(statements) == 2:
            raise TheoremViolationError(
                f"Addition-Deletion inconsistency at hyperplane {h}: "
                f"statements {statements} with candidate exponents {cand}")
    return verdict


# ---------------------------------------------------------------------------
# Quick obstruction (restriction sizes) and inductive freeness


def quick_non_if(arr: Arrangement):
    """Restriction-size obstruction to inductive freeness.

    If A is free with exponents [1, e, f] and no restriction has size e+1
    or f+1, no Addition-Deletion step can ever apply to A, so A is not
    inductively free.  Returns the witness table {label: |A^H|} when the
    obstruction fires, else None.
    """
    verdict = decide_freeness(arr)
    if not isinstance(verdict, Free):
        return None
    _, e, f = _multiset(verdict.exponents)
    sizes = {h: restriction_profile(arr, h)[0] for h in range(1, arr.n + 1)}
    if any(s in (e + 1, f + 1) for s in sizes.values()):
        return None
    return sizes


@dataclass(frozen=True)
class IFStep:
    """One deletion step in an inductive-freeness chain."""

    n: int
    label: int                  # label within the arrangement at this step
    exponents: tuple
    restriction_size: int


@dataclass(frozen=True)
class IFCertificate:
    """Deletion chain from A down to a base case.

    base is "triangle" (three essential hyperplanes, exponents [1,1,1]) or
    "pencil" (the final deletion leaves a rank-2 pencil, exponents [0,1,m-1]).
    """

    steps: tuple
    base: str


_IF_CACHE: dict = {}


def inductively_free(arr: Arrangement):
    """Certificate chain if the arrangement is inductively free, else None.

    Inductive freeness only depends on the intersection lattice, so verdicts
    are memoized on the canonical lattice key.  Each step deletes one
    hyperplane H whose forced exponent bookkeeping [1, s-1, n-s] matches the
    characteristic polynomial roots; by deletion-restriction the deletion
    then automatically carries the matching [1, s-1, n-s-1].
    """
    cert = _if_search(arr)
    return cert


def _if_search(arr: Arrangement):
    exps = arr.char_poly().exponents()
    if exps is None:
        return None
    if arr.n == 3:
        return IFCertificate((), "triangle")
    key = canonical_key(arr.lattice())
    known = _IF_CACHE.get(key)
    if known is False:
        return None
    if quick_non_if(arr) is not None:
        _IF_CACHE[key] = False
        return None
    n = arr.n
    target = _multiset(exps)
    for h in range(1, n + 1):
        s, _ = restriction_profile(arr, h)
        if _multiset((1, s - 1, n - s)) != target:
            continue
        if deletion_is_essential(arr, h):
            sub, _ = delete(arr, h)
            sub_cert = _if_search(sub)
            if sub_cert is not None:
                _IF_CACHE[key] = True
                step = IFStep(n, h, target, s)
                return IFCertificate((step,) + sub_cert.steps, sub_cert.base)
        elif s == n - 1:
            # The deletion is a pencil of n-1 hyperplanes: free with
            # exponents [0, 1, n-2], and A is the near-pencil [1, 1, n-2].
            _IF_CACHE[key] = True
            return IFCertificate((IFStep(n, h, target, s),), "pencil")
    _IF_CACHE[key] = False
    return None


# ---------------------------------------------------------------------------
# Candidate additions


def _flat_direction(arr: Arrangement, flat):
    labels = sorted(flat)
    return cross(arr.column(labels[0]), arr.column(labels[1]))


def _normalize_covector(dom, vec):
    lead = next(x for x in vec if x)
    inv = dom.invert(lead)
    return tuple(x * inv for x in vec)


def candidate_additions(arr: Arrangement, targets):
    """New hyperplanes H with predicted restriction size in targets.

    Enumerates lines through pairs of distinct rank-2 flats (in the dual
    projective plane every flat is a point, and two points span a line).
    The predicted size uses the counting identity
        |(A+H)^H| = n - sum over flats X contained in H of (m_X - 1).
    Returns (candidates, complete).  complete is True when
    n - max(targets) > max multiplicity - 1: any H with a target size must
    then contain at least two existing flats, hence lies in the enumeration.
    """
    targets = set(targets)
    lat = arr.lattice()
    n = arr.n
    dom = arr.domain
    if not targets:
        return [], True
    dirs = [_flat_direction(arr, flat) for flat in lat.flats]
    mults = [len(flat) for flat in lat.flats]
    existing = {_normalize_covector(dom, arr.column(h))
                for h in range(1, n + 1)}
    seen = set()
    candidates = []
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            normal = cross(dirs[i], dirs[j])
            if not any(normal):
                continue
            normal = _normalize_covector(dom, normal)
            if normal in seen or normal in existing:
                continue
            seen.add(normal)
            absorbed = sum(
                m - 1 for d, m in zip(dirs, mults)
                if not (normal[0] * d[0] + normal[1] * d[1]
                        + normal[2] * d[2]))
            if n - absorbed in targets:
                candidates.append(normal)
    candidates.sort(key=lambda v: tuple(str(x) for x in v))
    complete = n - max(targets) > max(mults) - 1
    return candidates, complete


# ---------------------------------------------------------------------------
# Recursive freeness


@dataclass(frozen=True)
class Move:
    """One search move: ("delete", (label,)) or ("add", covector scalars)."""

    action: str
    payload: tuple


@dataclass(frozen=True)
class Expansion:
    """Per-state record justifying the soundness flag."""

    n: int
    exponents: tuple
    deletion_moves: int
    addition_targets: tuple
    addition_candidates: int
    complete: bool


@dataclass(frozen=True)
class RFSearchReport:
    verdict: str                 # "RF" | "NotRF" | "Unknown"
    chain: tuple = ()            # Moves from the input to an IF state
    explored: int = 0
    sound: bool = False          # NotRF only: all candidate sets complete
    reason: str = ""
    expansions: tuple = ()


def _addition_targets(n: int, exps: tuple):
    """Restriction sizes m for which adding a hyperplane keeps valid
    Addition-Deletion bookkeeping: [1, m-1, n-m] must equal exp A."""
    target = _multiset(exps)
    return tuple(sorted(
        m for m in range(2, n + 1)
        if _multiset((1, m - 1, n - m)) == target))


def _rf_state_key(arr: Arrangement) -> tuple:
    # Lattice key AND coordinates: freeness is not known to be
    # combinatorial (Terao's problem), so coordinate-distinct states with
    # equal lattices are kept distinct.
    return (canonical_key(arr.lattice()), state_key(arr))


def recursively_free(arr: Arrangement, max_n: int,
                     max_states: int = 10000) -> RFSearchReport:
    """Bounded bidirectional search for a recursive-freeness chain.

    Moves are deletions and additions whose exponent bookkeeping matches
    the Addition-Deletion theorem; success is reaching an inductively free
    state.  NotRF is reported only when the search exhausts with every
    addition candidate set provably complete and no addition blocked by
    max_n; otherwise Unknown.
    """
    if max_n < arr.n:
        raise ValueError(f"max_n = {max_n} is below |A| = {arr.n}")
    start_key = _rf_state_key(arr)
    seen = {start_key}
    parents: dict = {start_key: None}
    queue = deque([(arr, start_key)])
    explored = 0
    all_complete = True
    truncated = False
    expansions = []

    def chain_to(key) -> tuple:
        moves = []
        while parents[key] is not None:
            key, move = parents[key]
            moves.append(move)
        return tuple(reversed(moves))

    while queue:
        if explored >= max_states:
            return RFSearchReport(
                "Unknown", explored=explored,
                reason=f"state budget {max_states} exhausted",
                expansions=tuple(expansions))
        state, key = queue.popleft()
        explored += 1
        if inductively_free(state) is not None:
            return RFSearchReport(
                "RF", chain=chain_to(key), explored=explored,
                reason="reached an inductively free state",
                expansions=tuple(expansions))
        exps = state.char_poly().exponents()
        if exps is None:
            continue  # not free, so no chain passes through this state
        n = state.n
        target = _multiset(exps)
        deletion_moves = 0
        for h in range(1, n + 1):
            s, _ = restriction_profile(state, h)
            if _multiset((1, s - 1, n - s)) != target:
                continue
            if not deletion_is_essential(state, h):
                continue  # a pencil deletion means state is a near-pencil,
                          # already accepted by the IF test above
            sub, _ = delete(state, h)
            deletion_moves += 1
            sub_key = _rf_state_key(sub)
            if sub_key not in seen:
                seen.add(sub_key)
                parents[sub_key] = (key, Move("delete", (h,)))
                queue.append((sub, sub_key))
        targets = _addition_targets(n, exps)
        cands, complete = [], True
        if targets:
            if n + 1 > max_n:
                truncated = True
            else:
                cands, complete = candidate_additions(state, set(targets))
                all_complete = all_complete and complete
                for cov in cands:
                    grown = build(list(state.columns) + [cov], state.domain)
                    g_key = _rf_state_key(grown)
                    if g_key not in seen:
                        seen.add(g_key)
                        move = Move("add", tuple(cov))
                        parents[g_key] = (key, move)
                        queue.append((grown, g_key))
        expansions.append(Expansion(
            n, target, deletion_moves, targets, len(cands), complete))
    if truncated:
        return RFSearchReport(
            "Unknown", explored=explored,
            reason=f"addition moves blocked by max_n = {max_n}",
            expansions=tuple(expansions))
    return RFSearchReport(
        "NotRF", explored=explored, sound=all_complete,
        reason="search space exhausted with complete candidate sets"
        if all_complete else "search space exhausted, but some candidate "
        "sets were not provably complete",
        expansions=tuple(expansions))


def replay_chain(arr: Arrangement, moves) -> Arrangement:
    """Re-execute a recursive-freeness chain, re-verifying every move.

    Each move must satisfy the Addition-Deletion bookkeeping against the
    state it is applied to, and the final state must be inductively free.
    Returns the final arrangement; raises ValueError on any violation.
    """
    state = arr
    for idx, move in enumerate(moves, start=1):
        exps = state.char_poly().exponents()
        if exps is None:
            raise ValueError(
                f"move {idx}: characteristic polynomial does not split")
        n = state.n
        target = _multiset(exps)
        if move.action == "delete":
            h = move.payload[0]
            s, _ = restriction_profile(state, h)
            if _multiset((1, s - 1, n - s)) != target:
                raise ValueError(
                    f"move {idx}: deleting {h} breaks the exponent "
                    f"bookkeeping (|A^H| = {s}, exponents {target})")
            state, _ = delete(state, h)
        elif move.action == "add":
            grown = build(list(state.columns) + [tuple(move.payload)],
                          state.domain)
            s, _ = restriction_profile(grown, grown.n)
            if _multiset((1, s - 1, n - s)) != target:
                raise ValueError(
                    f"move {idx}: the added hyperplane has restriction "
                    f"size {s}, incompatible with exponents {target}")
            state = grown
        else:
            raise ValueError(f"move {idx}: unknown action {move.action!r}")
    if inductively_free(state) is None:
        raise ValueError("final state of the chain is not inductively free")
    return state


# ---------------------------------------------------------------------------
# Deletion pairs


@dataclass(frozen=True)
class PairCheck:
    status: str          # "Consistent" | "Violated" | "NotApplicable"
    common_root: bool
    detail: str = ""


def abe_pair_check(arr: Arrangement, h: int) -> PairCheck:
    """Deletion-pair freeness consistency.

    In rank 3 both characteristic polynomials share the root 1, so the
    meaningful condition is a common root of the reduced quadratics
    chi/(x-1).  When they share a root, both members of the pair must be
    free; a Violated result would falsify the implementation.
    """
    if not deletion_is_essential(arr, h):
        raise NotEssentialError(
            f"deleting hyperplane {h} drops the rank below 3")
    sub, _ = delete(arr, h)
    c1, b1, _ = arr.char_poly().reduced()
    c2, b2, _ = sub.char_poly().reduced()
    # Common root of x^2 + b1 x + c1 and x^2 + b2 x + c2: their resultant
    # (c2 - c1)^2 + (b2 - b1)(b2 c1 - b1 c2) vanishes.
    resultant = (c2 - c1) ** 2 + (b2 - b1) * (b2 * c1 - b1 * c2)
    if resultant != 0:
        return PairCheck("NotApplicable", False,
                         "no common root of the reduced polynomials")
    va = decide_freeness(arr)
    vb = decide_freeness(sub)
    if isinstance(va, Inconclusive) or isinstance(vb, Inconclusive):
        return PairCheck("NotApplicable", True,
                         "freeness undecided for at least one member")
    if isinstance(va, Free) and isinstance(vb, Free):
        return PairCheck("Consistent", True)
    return PairCheck(
        "Violated", True,
        f"verdicts {type(va).__name__}/{type(vb).__name__} despite a "
        "common reduced root")
