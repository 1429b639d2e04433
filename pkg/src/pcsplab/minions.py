"""Minions: arity-graded element families closed under minoring.

A minor map pi from [n] to [m] is a tuple of 1-based images, `len(pi) == n`;
the target arity m is passed alongside because it is not recoverable from
the images (padding coordinates matter for the tuple minions).

Concrete minions:

* `AIP`      -- integer tuples summing to 1; minoring adds preimage entries.
* `BLP`      -- rational tuples in [0,1] summing to 1; same minoring.
* `BLP_AIP`  -- pairs (f, g) with f in BLP, g in AIP and f[i]=0 => g[i]=0.
* `PROJ`     -- indices; minoring applies the map to the index.
* `cyclic_minion(p)` -- ordered tuples of disjoint subsets covering Z_p,
  taken modulo simultaneous rotation of all blocks.
* `wnu_minion(k)` -- ordered tuples of disjoint subsets covering {1..k},
  modulo the identification that moves a lone block around (see
  `equal_mod_wnu`).
* `pol_minion(A, B)` -- homomorphisms from powers of A to B.

The first three are not locally finite; `enumerate` raises on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .structures import (
    Structure,
    enumerate_homomorphisms,
    find_homomorphism,
    hom,
    is_homomorphism,
    power,
    structure,
)

WNU_SCAN_GUARD = 12  # 2**n maps scanned by the lone-block identification


class NotEnumerable(ValueError):
    pass


def identity_map(n):
    return tuple(range(1, n + 1))


def compose(outer, inner):
    """(outer o inner)(i) = outer[inner[i]]; inner feeds into outer."""
    return tuple(outer[j - 1] for j in inner)


def cyclic_shift(n):
    """The map (n, 1, 2, ..., n-1)."""
    return (n,) + tuple(range(1, n))


def lone_coordinate_map(n, i):
    """sigma_i from [n] to [2]: i goes to 1, everything else to 2."""
    return tuple(1 if j == i else 2 for j in range(1, n + 1))


def _preimage_sum(f, pi, m, zero):
    out = [zero] * m
    for j, img in enumerate(pi):
        out[img - 1] += f[j]
    return tuple(out)


# ---------------------------------------------------------------------------
# element kinds
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ProjEl:
    arity: int
    index: int


@dataclass(frozen=True)
class PolyEl:
    """A homomorphism from a power of the left structure, stored as a table."""

    arity: int
    table: tuple  # sorted tuple of (arg tuple, value)

    def __call__(self, args):
        return dict(self.table)[tuple(args)]


class Minion:
    """Interface shared by all concrete minions."""

    name = "minion"
    enumerable = True

    def arity(self, f):
        raise NotImplementedError

    def minor(self, f, pi, m):
        raise NotImplementedError

    def equal(self, f, g):
        return f == g

    def enumerate(self, n):
        raise NotEnumerable(self.name)

    def owns(self, f):
        raise NotImplementedError

    def validate(self, f):
        """Raise ValueError if f is not an element of this minion."""


class AipMinion(Minion):
    name = "aip"
    enumerable = False

    def arity(self, f):
        return len(f)

    def validate(self, f):
        if any(int(x) != x for x in f) or sum(f) != 1:
            raise ValueError(f"not an integer tuple with sum 1: {f!r}")

    def minor(self, f, pi, m):
        if len(pi) != len(f):
            raise ValueError("minor map length != element arity")
        return _preimage_sum(f, pi, m, 0)

    def owns(self, f):
        return isinstance(f, tuple) and all(isinstance(x, int) for x in f)


class BlpMinion(Minion):
    name = "blp"
    enumerable = False

    def arity(self, f):
        return len(f)

    def validate(self, f):
        if sum(f) != 1 or any(x < 0 or x > 1 for x in f):
            raise ValueError(f"not a [0,1] rational tuple with sum 1: {f!r}")

    def minor(self, f, pi, m):
        if len(pi) != len(f):
            raise ValueError("minor map length != element arity")
        return _preimage_sum(f, pi, m, Fraction(0))

    def owns(self, f):
        return isinstance(f, tuple) and all(isinstance(x, Fraction) for x in f)


class BlpAipMinion(Minion):
    name = "blpaip"
    enumerable = False

    def arity(self, f):
        return len(f[0])

    def validate(self, fg):
        f, g = fg
        BLP.validate(f)
        AIP.validate(g)
        if any(x == 0 and y != 0 for x, y in zip(f, g)):
            raise ValueError("zero in the rational part must force a zero integer part")

    def minor(self, fg, pi, m):
        f, g = fg
        return (BLP.minor(f, pi, m), AIP.minor(g, pi, m))

    def owns(self, fg):
        return isinstance(fg, tuple) and len(fg) == 2 and isinstance(fg[0], tuple)


class ProjMinion(Minion):
    name = "proj"

    def arity(self, f):
        return f.arity

    def validate(self, f):
        if not 1 <= f.index <= f.arity:
            raise ValueError("projection index out of range")

    def minor(self, f, pi, m):
        if len(pi) != f.arity:
            raise ValueError("minor map length != element arity")
        return ProjEl(m, pi[f.index - 1])

    def enumerate(self, n):
        return [ProjEl(n, i) for i in range(1, n + 1)]

    def owns(self, f):
        return isinstance(f, ProjEl)


class TrivialMinion(Minion):
    """Exactly one element per arity; every minor is the target element."""

    name = "trivial"

    def arity(self, f):
        return f[1]

    def minor(self, f, pi, m):
        return ("*", m)

    def enumerate(self, n):
        return [("*", n)]

    def owns(self, f):
        return isinstance(f, tuple) and len(f) == 2 and f[0] == "*"


def _blocks_minor(blocks, pi, m):
    out = [frozenset()] * m
    for j, img in enumerate(pi):
        out[img - 1] = out[img - 1] | blocks[j]
    return tuple(out)


def _blocks_key(blocks):
    return tuple(tuple(sorted(b)) for b in blocks)


def equal_mod_cyclic(a, b):
    """Blocks over Z_p equal after some simultaneous rotation."""
    ground_a = frozenset().union(*a)
    ground_b = frozenset().union(*b)
    if ground_a != ground_b or len(a) != len(b):
        raise ValueError("elements of different cyclic minions")
    p = len(ground_a)
    for shift in range(p):
        if all(frozenset((x + shift) % p for x in ba) == bb for ba, bb in zip(a, b)):
            return True
    return False


def equal_mod_wnu(a, b):
    """Lone-block identification of ordered partitions of {1..k}.

    True iff for every map pi from [n] to [2] the two pi-minors are equal
    or agree up to relocating a lone element: both have a singleton block
    in the same position.  (Scanning both positions is forced by symmetry:
    the swap map exchanges the two blocks.)
    """
    if len(a) != len(b):
        raise ValueError("arity mismatch")
    n = len(a)
    if n > WNU_SCAN_GUARD:
        raise ValueError(f"arity {n} above the 2**n scan guard {WNU_SCAN_GUARD}")
    ground_a = frozenset().union(*a)
    if ground_a != frozenset().union(*b):
        raise ValueError("elements of different wnu minions")
    for pi in product((1, 2), repeat=n):
        ma = _blocks_minor(a, pi, 2)
        mb = _blocks_minor(b, pi, 2)
        if ma == mb:
            continue
        if len(ma[0]) == len(mb[0]) == 1 or len(ma[1]) == len(mb[1]) == 1:
            continue
        return False
    return True


class _BlockMinion(Minion):
    """Shared machinery for the ordered-block minions over a ground set."""

    ground = frozenset()

    def arity(self, f):
        return len(f)

    def validate(self, f):
        seen = set()
        for b in f:
            if b & seen:
                raise ValueError("blocks are not disjoint")
            seen |= b
        if seen != self.ground:
            raise ValueError("blocks do not cover the ground set")

    def _all_elements(self, n):
        ground = sorted(self.ground)
        out = []
        for assign in product(range(n), repeat=len(ground)):
            out.append(
                tuple(
                    frozenset(g for g, blk in zip(ground, assign) if blk == j)
                    for j in range(n)
                )
            )
        return out

    def owns(self, f):
        try:
            return frozenset().union(*f) == self.ground
        except TypeError:
            return False


class CyclicMinion(_BlockMinion):
    """Plain C_p: ordered tuples of disjoint subsets covering Z_p."""

    def __init__(self, p):
        self.p = p
        self.ground = frozenset(range(p))
        self.name = f"cyclic({p})"

    def minor(self, f, pi, m):
        if len(pi) != len(f):
            raise ValueError("minor map length != element arity")
        return _blocks_minor(f, pi, m)

    def enumerate(self, n):
        return sorted(self._all_elements(n), key=_blocks_key)


class CyclicQuotientMinion(CyclicMinion):
    """C-bar_p: C_p modulo simultaneous rotation, via least-rotation reps."""

    def __init__(self, p):
        super().__init__(p)
        self.name = f"cyclic-bar({p})"

    def canonical(self, blocks):
        best = None
        for shift in range(self.p):
            cand = tuple(frozenset((x + shift) % self.p for x in b) for b in blocks)
            key = _blocks_key(cand)
            if best is None or key < best[0]:
                best = (key, cand)
        return best[1]

    def minor(self, f, pi, m):
        return self.canonical(super().minor(f, pi, m))

    def enumerate(self, n):
        return sorted({self.canonical(b) for b in self._all_elements(n)}, key=_blocks_key)


class WnuMinion(_BlockMinion):
    """Plain W_k: ordered tuples of disjoint subsets covering {1..k}."""

    def __init__(self, k):
        self.k = k
        self.ground = frozenset(range(1, k + 1))
        self.name = f"wnu({k})"

    def minor(self, f, pi, m):
        if len(pi) != len(f):
            raise ValueError("minor map length != element arity")
        return _blocks_minor(f, pi, m)

    def enumerate(self, n):
        return sorted(self._all_elements(n), key=_blocks_key)


class WnuQuotientMinion(WnuMinion):
    """W-bar_k: W_k modulo the lone-block identification."""

    def __init__(self, k):
        super().__init__(k)
        self.name = f"wnu-bar({k})"

    @lru_cache(maxsize=None)
    def _canon_table(self, n):
        """element -> canonical class representative, for all of W_k(n)."""
        by_sizes = {}
        for el in self._all_elements(n):
            by_sizes.setdefault(tuple(len(b) for b in el), []).append(el)
        table = {}
        for bucket in by_sizes.values():
            bucket.sort(key=_blocks_key)
            canons = []
            for el in bucket:
                for canon in canons:
                    if equal_mod_wnu(el, canon):
                        table[el] = canon
                        break
                else:
                    canons.append(el)
                    table[el] = el
        return table

    def canonical(self, blocks):
        return self._canon_table(len(blocks))[tuple(blocks)]

    def minor(self, f, pi, m):
        return self.canonical(super().minor(f, pi, m))

    def enumerate(self, n):
        return sorted(set(self._canon_table(n).values()), key=_blocks_key)


class PolMinion(Minion):
    """Pol(A, B): n-ary elements are the homomorphisms from A^n to B."""

    def __init__(self, A: Structure, B: Structure):
        self.A = A
        self.B = B
        self.name = "pol"
        self._cache = {}

    def arity(self, f):
        return f.arity

    def minor(self, f, pi, m):
        if len(pi) != f.arity:
            raise ValueError("minor map length != element arity")
        table = dict(f.table)
        n = f.arity
        out = {}
        for args in product(self.A.universe, repeat=m):
            out[args] = table[tuple(args[pi[i] - 1] for i in range(n))]
        return PolyEl(m, tuple(sorted(out.items())))

    def enumerate(self, n):
        if n not in self._cache:
            P = power(self.A, n)
            homs = enumerate_homomorphisms(P, self.B)
            self._cache[n] = [PolyEl(n, tuple(sorted(h.mapping))) for h in homs]
        return self._cache[n]

    def validate(self, f):
        P = power(self.A, f.arity)
        h = hom(P, self.B, dict(f.table))
        if not is_homomorphism(h):
            raise ValueError("table is not a polymorphism")

    def owns(self, f):
        return isinstance(f, PolyEl)

    def as_hom(self, f):
        return hom(power(self.A, f.arity), self.B, dict(f.table))


class UnionMinion(Minion):
    """Disjoint union of minions from one family (e.g. all C-bar_p)."""

    def __init__(self, parts, name):
        self.parts = list(parts)
        self.name = name

    def _part_of(self, f):
        for part in self.parts:
            if part.owns(f):
                return part
        raise ValueError(f"element {f!r} not owned by any part of {self.name}")

    def arity(self, f):
        return self._part_of(f).arity(f)

    def minor(self, f, pi, m):
        return self._part_of(f).minor(f, pi, m)

    def equal(self, f, g):
        return f == g

    def enumerate(self, n):
        out = []
        for part in self.parts:
            out.extend(part.enumerate(n))
        return out

    def owns(self, f):
        return any(part.owns(f) for part in self.parts)


AIP = AipMinion()
BLP = BlpMinion()
BLP_AIP = BlpAipMinion()
PROJ = ProjMinion()
TRIVIAL = TrivialMinion()

_kind_cache = {}


def _cached(cls, key):
    if (cls, key) not in _kind_cache:
        _kind_cache[(cls, key)] = cls(key)
    return _kind_cache[(cls, key)]


def cyclic_minion(p):
    return _cached(CyclicMinion, p)


def cyclic_quotient(p):
    return _cached(CyclicQuotientMinion, p)


def wnu_minion(k):
    return _cached(WnuMinion, k)


def wnu_quotient(k):
    return _cached(WnuQuotientMinion, k)


def cyclic_union(primes):
    """The disjoint union of the rotation quotients over the given primes."""
    return UnionMinion([cyclic_quotient(p) for p in primes], "cyclic-union")


def wnu_union(ks):
    return UnionMinion([wnu_quotient(k) for k in ks], "wnu-union")


def pol_minion(A, B):
    return PolMinion(A, B)


def aip_element(*entries):
    f = tuple(int(x) for x in entries)
    AIP.validate(f)
    return f


def blp_element(*entries):
    f = tuple(Fraction(x) for x in entries)
    BLP.validate(f)
    return f


# ---------------------------------------------------------------------------
# special elements
# ---------------------------------------------------------------------------


def is_cyclic(minion, f):
    """f equals its cyclic-shift minor (equality of the minion's elements)."""
    n = minion.arity(f)
    if n < 2:
        raise ValueError("cyclicity needs arity >= 2")
    return minion.equal(f, minion.minor(f, cyclic_shift(n), n))


def is_wnu(minion, f):
    """All lone-coordinate binary minors of f coincide."""
    n = minion.arity(f)
    if n < 2:
        raise ValueError("the wnu identities need arity >= 2")
    first = minion.minor(f, lone_coordinate_map(n, 1), 2)
    return all(
        minion.equal(first, minion.minor(f, lone_coordinate_map(n, i), 2))
        for i in range(2, n + 1)
    )


def has_cyclic_element(minion, n):
    return any(is_cyclic(minion, f) for f in minion.enumerate(n))


def has_wnu_element(minion, n):
    return any(is_wnu(minion, f) for f in minion.enumerate(n))


def find_special_polymorphism(A: Structure, B: Structure, mode, n):
    """A homomorphism from A^n to B satisfying the cyclic or wnu identities.

    The identities say the map is constant on certain argument tuples, so
    the search quotients the power structure by those identifications and
    runs plain homomorphism search on one representative per orbit.
    """
    if mode not in ("cyclic", "wnu"):
        raise ValueError(f"unknown mode {mode!r}")
    if n < 2:
        raise ValueError("mode identities need arity >= 2")
    if find_homomorphism(A, B) is None:
        raise ValueError("the pair is not a template: no homomorphism A -> B")
    P = power(A, n)
    parent = {v: v for v in P.universe}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry, key=P.universe.index)] = min(rx, ry, key=P.universe.index)

    if mode == "cyclic":
        shift = cyclic_shift(n)
        for t in P.universe:
            union(t, tuple(t[shift[i] - 1] for i in range(n)))
    else:
        for c1 in A.universe:
            for c2 in A.universe:
                if c1 == c2:
                    continue
                base = None
                for i in range(n):
                    t = tuple(c1 if j == i else c2 for j in range(n))
                    if base is None:
                        base = t
                    else:
                        union(base, t)

    reps = [v for v in P.universe if find(v) == v]
    rels = {
        name: [tuple(find(a) for a in t) for t in P.rel(name)] for name in P.signature.names
    }
    Q = structure(P.signature, reps, rels)
    h = find_homomorphism(Q, B)
    if h is None:
        return None
    hd = h.as_dict()
    full = hom(P, B, {v: hd[find(v)] for v in P.universe})
    assert is_homomorphism(full)
    return full
