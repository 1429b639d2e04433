"""Finite relational signatures, structures, and homomorphism search.

Structures are immutable: the universe is an ordered tuple of hashable
atoms, relations are ordered tuples of tuples (input order is preserved
because several constructions downstream rely on a fixed enumeration of
universes and relations).  Homomorphism search is plain backtracking with
arc-consistency propagation; the variable order is the universe order of
the source and the value order is the universe order of the target, so
returned witnesses are deterministic.

The text format `.pcs` is defined at the bottom of the module:

    # comment
    signature O:1 E1:2 E2:2
    structure grid2
    universe a b
    O (a)
    E1 (a b)
    end
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import product


class SignatureMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """A finite set of relation symbols with positive arities."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError("duplicate relation symbol")
        for name, ar in self.symbols:
            if ar < 1:
                raise ValueError(f"arity of {name} must be >= 1")

    def arity(self, name):
        for s, ar in self.symbols:
            if s == name:
                return ar
        raise KeyError(name)

    @property
    def names(self):
        return tuple(s for s, _ in self.symbols)


def signature(*symbols):
    """Shorthand: signature(("E", 2), ("O", 1))."""
    return Signature(tuple(symbols))


@dataclass(frozen=True)
class Structure:
    """A finite relational structure.

    `relations` maps each symbol to an ordered, duplicate-free tuple of
    tuples.  Unlisted symbols denote empty relations.
    """

    signature: Signature
    universe: tuple
    relations: tuple = field(default=())  # tuple of (name, tuple-of-tuples)

    def __post_init__(self):
        uni = set(self.universe)
        if len(uni) != len(self.universe):
            raise ValueError("universe atoms must be distinct")
        seen = set()
        for name, tuples in self.relations:
            ar = self.signature.arity(name)
            if name in seen:
                raise ValueError(f"relation {name} listed twice")
            seen.add(name)
            for t in tuples:
                if len(t) != ar:
                    raise ValueError(f"tuple {t!r} has wrong arity for {name}")
                if any(a not in uni for a in t):
                    raise ValueError(f"tuple {t!r} leaves the universe")

    def rel(self, name):
        self.signature.arity(name)  # raises KeyError on unknown symbol
        for n, tuples in self.relations:
            if n == name:
                return tuples
        return ()

    def rel_set(self, name):
        return frozenset(self.rel(name))

    @property
    def size(self):
        return len(self.universe)

    def same_as(self, other):
        """Equality as labelled structures (relation order ignored)."""
        return (
            self.signature == other.signature
            and self.universe == other.universe
            and all(self.rel_set(n) == other.rel_set(n) for n in self.signature.names)
        )


def structure(sig, universe, rels=None):
    """Build a Structure from a dict of relations, dropping duplicates."""
    rels = rels or {}
    packed = []
    for name in sig.names:
        tuples = rels.get(name, ())
        out, seen = [], set()
        for t in tuples:
            t = tuple(t)
            if t not in seen:
                seen.add(t)
                out.append(t)
        if out:
            packed.append((name, tuple(out)))
    return Structure(sig, tuple(universe), tuple(packed))


@dataclass(frozen=True)
class Hom:
    source: Structure
    target: Structure
    mapping: tuple  # tuple of (atom, atom) pairs, in source universe order

    def as_dict(self):
        return dict(self.mapping)

    def __call__(self, x):
        return self.as_dict()[x]

    def to_json(self):
        return json.dumps({"map": [[_token(a), _token(b)] for a, b in self.mapping]})


def hom(source, target, mapping):
    m = dict(mapping)
    return Hom(source, target, tuple((v, m[v]) for v in source.universe))


def is_homomorphism(h: Hom) -> bool:
    """Check that h preserves every relation tuple."""
    if h.source.signature != h.target.signature:
        raise SignatureMismatch("source and target have different signatures")
    m = h.as_dict()
    if set(m) != set(h.source.universe):
        raise ValueError("map is not total on the source universe")
    for a in m.values():
        if a not in set(h.target.universe):
            raise ValueError("map leaves the target universe")
    for name in h.source.signature.names:
        target_rel = h.target.rel_set(name)
        for t in h.source.rel(name):
            if tuple(m[a] for a in t) not in target_rel:
                return False
    return True


def compose_homs(g: Hom, h: Hom) -> Hom:
    """g after h (h: A -> B, g: B -> C)."""
    gm = g.as_dict()
    return hom(h.source, g.target, {v: gm[b] for v, b in h.mapping})


# ---------------------------------------------------------------------------
# homomorphism search: backtracking + arc consistency
# ---------------------------------------------------------------------------


def _constraints_of(I: Structure):
    """List of (relation name, source tuple) constraints."""
    out = []
    for name in I.signature.names:
        for t in I.rel(name):
            out.append((name, t))
    return out


def _revise_all(I, A, domains, constraints):
    """Generalised arc consistency to a fixpoint.  Returns False on wipeout."""
    changed = True
    rels = {name: A.rel(name) for name in A.signature.names}
    while changed:
        changed = False
        for name, t in constraints:
            tuples = [r for r in rels[name] if all(r[i] in domains[t[i]] for i in range(len(t)))]
            for i, v in enumerate(t):
                support = {r[i] for r in tuples}
                dom = domains[v]
                if not support:
                    domains[v] = []
                    return False
                if len(support) < len(dom):
                    newdom = [a for a in dom if a in support]
                    if len(newdom) < len(dom):
                        domains[v] = newdom
                        changed = True
                        if not newdom:
                            return False
    return True


def _search(I, A, limit):
    if I.signature != A.signature:
        raise SignatureMismatch("instance and target have different signatures")
    if I.size == 0:
        return [hom(I, A, {})]
    if A.size == 0:
        return []
    order = list(I.universe)
    constraints = _constraints_of(I)
    results = []

    def extend(idx, domains):
        if limit is not None and len(results) >= limit:
            return
        if idx == len(order):
            results.append(hom(I, A, {v: domains[v][0] for v in order}))
            return
        v = order[idx]
        for a in domains[v]:
            trial = {u: (list(d) if u != v else [a]) for u, d in domains.items()}
            if _revise_all(I, A, trial, constraints):
                extend(idx + 1, trial)
                if limit is not None and len(results) >= limit:
                    return

    domains = {v: list(A.universe) for v in order}
    if _revise_all(I, A, domains, constraints):
        extend(0, domains)
    return results


def find_homomorphism(I: Structure, A: Structure):
    """First homomorphism I -> A in lexicographic order, or None."""
    res = _search(I, A, 1)
    return res[0] if res else None


def enumerate_homomorphisms(I: Structure, A: Structure, limit=None):
    """All homomorphisms I -> A (up to `limit`), lexicographic in universe order."""
    return _search(I, A, limit)


def count_homomorphisms(I, A):
    return len(_search(I, A, None))


# ---------------------------------------------------------------------------
# structure combinators
# ---------------------------------------------------------------------------


def power(A: Structure, n: int) -> Structure:
    """n-th direct power; relation tuples are the componentwise combinations."""
    if n < 1:
        raise ValueError("power requires n >= 1")
    universe = list(product(A.universe, repeat=n))
    rels = {}
    for name in A.signature.names:
        ar = A.signature.arity(name)
        tuples = []
        for cols in product(A.rel(name), repeat=n):
            tuples.append(tuple(tuple(cols[j][i] for j in range(n)) for i in range(ar)))
        rels[name] = tuples
    return structure(A.signature, universe, rels)


def induced_substructure(A: Structure, S) -> Structure:
    S = list(S)
    sset = set(S)
    if not sset <= set(A.universe):
        raise ValueError("S is not a subset of the universe")
    keep = [a for a in A.universe if a in sset]
    rels = {
        name: [t for t in A.rel(name) if all(a in sset for a in t)]
        for name in A.signature.names
    }
    return structure(A.signature, keep, rels)


def disjoint_union(parts) -> Structure:
    parts = list(parts)
    if not parts:
        raise ValueError("disjoint_union of nothing")
    sig = parts[0].signature
    for p in parts:
        if p.signature != sig:
            raise SignatureMismatch("all parts must share a signature")
    universe = [(i, a) for i, p in enumerate(parts) for a in p.universe]
    rels = {}
    for name in sig.names:
        tuples = []
        for i, p in enumerate(parts):
            tuples.extend(tuple((i, a) for a in t) for t in p.rel(name))
        rels[name] = tuples
    return structure(sig, universe, rels)


def projection_hom(A: Structure, n: int, i: int) -> Hom:
    """The i-th projection power(A, n) -> A (1-based i)."""
    P = power(A, n)
    return hom(P, A, {v: v[i - 1] for v in P.universe})


# ---------------------------------------------------------------------------
# .pcs text format
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"^[^\s()#]+$")


def _token(atom) -> str:
    """Render an atom as a .pcs token (no spaces, parens, or '#')."""
    if isinstance(atom, str):
        s = atom
    elif isinstance(atom, tuple):
        s = ";".join(_token(a) for a in atom)
    else:
        s = str(atom)
    s = s.replace(" ", "").replace("(", "[").replace(")", "]").replace("#", "&")
    if not _TOKEN_RE.match(s):
        raise ValueError(f"atom {atom!r} has no printable token")
    return s


def serialize_structure(A: Structure, name="S") -> str:
    lines = ["signature " + " ".join(f"{n}:{a}" for n, a in A.signature.symbols)]
    lines.append(f"structure {name}")
    lines.append("universe " + " ".join(_token(a) for a in A.universe))
    for rel_name in A.signature.names:
        tuples = A.rel(rel_name)
        if tuples:
            body = " ".join("(" + " ".join(_token(a) for a in t) + ")" for t in tuples)
            lines.append(f"{rel_name} {body}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_pcs(text):
    """Parse a .pcs document; returns dict name -> Structure (string atoms)."""
    sig = None
    out = {}
    cur_name = None
    cur_universe = None
    cur_rels = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "signature":
            syms = []
            for w in words[1:]:
                name, _, ar = w.partition(":")
                if not ar.isdigit():
                    raise ValueError(f"line {lineno}: bad symbol {w!r}")
                syms.append((name, int(ar)))
            sig = Signature(tuple(syms))
        elif head == "structure":
            if sig is None:
                raise ValueError(f"line {lineno}: structure before signature")
            if cur_name is not None:
                raise ValueError(f"line {lineno}: nested structure block")
            if len(words) != 2:
                raise ValueError(f"line {lineno}: structure needs a name")
            cur_name, cur_universe, cur_rels = words[1], [], {}
        elif head == "universe":
            if cur_name is None:
                raise ValueError(f"line {lineno}: universe outside structure")
            cur_universe = words[1:]
        elif head == "end":
            if cur_name is None:
                raise ValueError(f"line {lineno}: stray end")
            out[cur_name] = structure(sig, cur_universe, cur_rels)
            cur_name = cur_universe = cur_rels = None
        else:
            if cur_name is None:
                raise ValueError(f"line {lineno}: relation line outside structure")
            ar = sig.arity(head)  # KeyError on unknown symbol
            body = line[len(head):]
            tuples = cur_rels.setdefault(head, [])
            for grp in re.findall(r"\(([^()]*)\)", body):
                entries = grp.split()
                if len(entries) != ar:
                    raise ValueError(f"line {lineno}: tuple arity mismatch for {head}")
                tuples.append(tuple(entries))
            rest = re.sub(r"\([^()]*\)", "", body).strip()
            if rest:
                raise ValueError(f"line {lineno}: trailing junk {rest!r}")
    if cur_name is not None:
        raise ValueError("unterminated structure block")
    return out


def parse_structure(text, name=None):
    d = parse_pcs(text)
    if name is not None:
        return d[name]
    if len(d) != 1:
        raise ValueError(f"expected exactly one structure, found {sorted(d)}")
    return next(iter(d.values()))


def hom_from_json(source, target, text):
    pairs = json.loads(text)["map"]
    return hom(source, target, {a: b for a, b in pairs})
