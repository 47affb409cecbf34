"""Finite 3-groups given by power-commutator presentations.

A presentation lists generators g1 < g2 < ... < gk with relative orders
(powers of 3), a power relation gi^{m_i} = word(g_{i+1}, ..., gk) for each
generator, and a conjugation relation gj^{gi} = word(g_{i+1}, ..., gk) for
every i < j.  Elements are normal-form exponent vectors and multiplication
is collection from the left; the groups in scope are small enough
(order <= 3^7) that naive rewriting with memoised conjugates is fine.

Consistency of a presentation is checked at construction time with the
standard overlap tests, which guarantee that normal forms are unique and
that the collected group has order exactly prod(relative orders).

Beyond collection the module knows the concrete family of groups this
package is about (``make_group``), how to cut finite kernels out of the
ambient compact group built from the order-27 extraspecial quotient
(``kernel_of_circle_hom``), and a brute-force isomorphism test behind an
invariant pre-filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod

from .intlinalg import FgAbGroup, IntMatrix, cokernel

ENUMERATION_BOUND = 3 ** 7


class BadParameter(ValueError):
    pass


class TooLarge(ValueError):
    pass


class InconsistentPresentation(ValueError):
    pass


class InfiniteKernel(ValueError):
    pass


def _is_power_of_3(n: int) -> bool:
    while n % 3 == 0:
        n //= 3
    return n == 1


# ---------------------------------------------------------------------------
# presentations and collection


@dataclass(frozen=True)
class PcPresentation:
    """A consistent power-commutator presentation of a finite 3-group.

    ``powers[i]`` is the normal form of g_i^{m_i} (supported on indices > i)
    and ``conjugates`` holds ((j, i), w) pairs with w the normal form of
    g_j^{g_i} for i < j.  Missing conjugation entries mean the pair commutes.
    """

    names: tuple
    orders: tuple
    powers: tuple
    conjugates: tuple

    def __post_init__(self):
        k = len(self.orders)
        assert len(self.names) == k and len(self.powers) == k
        for m in self.orders:
            if not (m > 1 and _is_power_of_3(m)):
                raise BadParameter("relative orders must be powers of 3")
        if self.order() > ENUMERATION_BOUND:
            raise TooLarge("presentations are limited to order 3^7")
        for i, w in enumerate(self.powers):
            if any(w[t] for t in range(i + 1)):
                raise InconsistentPresentation("power word must use later generators only")
        for (j, i), w in self.conjugates:
            assert i < j
            if any(w[t] for t in range(i + 1)):
                raise InconsistentPresentation("conjugate word must use later generators only")
        self._check_consistency()

    @staticmethod
    def build(names, orders, powers=None, conjugates=None) -> "PcPresentation":
        """Assemble a presentation from sparse relation dictionaries."""
        k = len(orders)
        zero = tuple(0 for _ in range(k))
        pw = [zero] * k
        for i, w in (powers or {}).items():
            pw[i] = tuple(w)
        conj = []
        for (j, i), w in sorted((conjugates or {}).items()):
            w = tuple(w)
            trivial = [0] * k
            trivial[j] = 1
            if w != tuple(trivial):
                conj.append(((j, i), w))
        return PcPresentation(
            tuple(names), tuple(int(m) for m in orders), tuple(pw), tuple(conj)
        )

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def order(self) -> int:
        return prod(self.orders)

    def identity(self) -> tuple:
        return tuple(0 for _ in self.orders)

    def generator(self, i: int) -> tuple:
        w = [0] * self.ngens
        w[i] = 1
        return tuple(w)

    def _conj_word(self, j: int, i: int):
        for (jj, ii), w in self.conjugates:
            if jj == j and ii == i:
                return w
        return None

    # -- collection --------------------------------------------------------

    def multiply(self, a: tuple, b: tuple) -> tuple:
        """Normal form of a * b, by collection from the left."""
        for w in (a, b):
            assert len(w) == self.ngens
            assert all(0 <= e < m for e, m in zip(w, self.orders))
        return self._mul(a, b, 0)

    def _mul(self, a, b, lo):
        k = self.ngens
        if lo == k or all(e == 0 for e in b[lo:]):
            return a
        if all(e == 0 for e in a[lo:]):
            merged = list(a[:lo]) + list(b[lo:])
            return tuple(merged)
        ai, bi = a[lo], b[lo]
        a_tail = a[:lo] + (0,) + a[lo + 1:]
        b_tail = b[:lo] + (0,) + b[lo + 1:]
        t = self._conj_power(a_tail, lo, bi)
        rest = self._mul(t, b_tail, lo + 1)
        c = ai + bi
        if c >= self.orders[lo]:
            c -= self.orders[lo]
            rest = self._mul(self.powers[lo], rest, lo + 1)
        out = list(rest)
        out[lo] = c
        return tuple(out)

    def _conj_power(self, w, i, e):
        """(w)^{g_i^e} for w supported on indices > i."""
        for _ in range(e):
            if all(x == 0 for x in w[i + 1:]):
                break
            acc = self.identity()
            changed = False
            for j in range(i + 1, self.ngens):
                if not w[j]:
                    continue
                cw = self._conj_word(j, i)
                if cw is None:
                    piece = list(self.identity())
                    piece[j] = w[j]
                    piece = tuple(piece)
                else:
                    changed = True
                    piece = self._word_power(cw, w[j], i + 1)
                acc = self._mul(acc, piece, i + 1)
            if not changed:
                break
            w = acc
        return w

    def _word_power(self, w, e, lo):
        result = self.identity()
        base = w
        while e:
            if e & 1:
                result = self._mul(result, base, lo)
            e >>= 1
            if e:
                base = self._mul(base, base, lo)
        return result

    def power(self, w: tuple, e: int) -> tuple:
        if e < 0:
            return self.power(self.inverse(w), -e)
        return self._word_power(w, e, 0)

    def inverse(self, w: tuple) -> tuple:
        """Right inverse found by clearing exponents left to right."""
        inv = self.identity()
        cur = w
        for i in range(self.ngens):
            e = cur[i]
            if e:
                step = self._word_power(self.generator(i), self.orders[i] - e, 0)
                inv = self.multiply(inv, step)
                cur = self.multiply(w, inv)
        assert cur == self.identity()
        return inv

    def commutator(self, a: tuple, b: tuple) -> tuple:
        """[a, b] = a^-1 b^-1 a b."""
        ia, ib = self.inverse(a), self.inverse(b)
        return self.multiply(self.multiply(ia, ib), self.multiply(a, b))

    def element_order(self, w: tuple) -> int:
        n = 1
        while w != self.identity():
            w = self._word_power(w, 3, 0)
            n *= 3
        return n

    # -- consistency (overlap) tests ----------------------------------------

    def _check_consistency(self):
        k = self.ngens
        gens = [self.generator(i) for i in range(k)]
        mul = self._mul
        for i in range(k):
            for j in range(i + 1, k):
                for l in range(j + 1, k):
                    lhs = mul(mul(gens[l], gens[j], 0), gens[i], 0)
                    rhs = mul(gens[l], mul(gens[j], gens[i], 0), 0)
                    if lhs != rhs:
                        raise InconsistentPresentation(
                            f"overlap g{l}.g{j}.g{i} collects two ways"
                        )
        for i in range(k):
            for j in range(i + 1, k):
                gj_pow = self._word_power(gens[j], self.orders[j] - 1, 0)
                if mul(mul(gj_pow, gens[j], 0), gens[i], 0) != mul(
                    gj_pow, mul(gens[j], gens[i], 0), 0
                ):
                    raise InconsistentPresentation(f"overlap g{j}^m.g{i} collects two ways")
                gi_pow = self._word_power(gens[i], self.orders[i] - 1, 0)
                if mul(gens[j], mul(gi_pow, gens[i], 0), 0) != mul(
                    mul(gens[j], gi_pow, 0), gens[i], 0
                ):
                    raise InconsistentPresentation(f"overlap g{j}.g{i}^m collects two ways")
        for i in range(k):
            gi_pow = self._word_power(gens[i], self.orders[i] - 1, 0)
            if mul(mul(gi_pow, gens[i], 0), gens[i], 0) != mul(
                gi_pow, mul(gens[i], gens[i], 0), 0
            ):
                raise InconsistentPresentation(f"overlap g{i}^(m+1) collects two ways")

    def word_str(self, w: tuple) -> str:
        parts = []
        for name, e in zip(self.names, w):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


def multiply(w1: tuple, w2: tuple, P: PcPresentation) -> tuple:
    """Normal form of w1 * w2 in the group presented by P."""
    return P.multiply(w1, w2)


# ---------------------------------------------------------------------------
# enumeration


class EnumeratedGroup:
    """Element table of a pc-group with right-multiplication lookups.

    Elements are indexed by the lexicographic order of their exponent
    vectors, so index 0 is the identity.  All tables are built once and
    then only read.
    """

    def __init__(self, pres: PcPresentation):
        self.pres = pres
        self.elements = [
            tuple(reversed(t))
            for t in product(*[range(m) for m in reversed(pres.orders)])
        ]
        self.index = {w: i for i, w in enumerate(self.elements)}
        self.right = [
            [self.index[pres.multiply(w, pres.generator(i))] for w in self.elements]
            for i in range(pres.ngens)
        ]
        self.inv = [self.index[pres.inverse(w)] for w in self.elements]
        self._classes = None

    def __len__(self):
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        word = self.elements[b]
        for i, e in enumerate(word):
            tab = self.right[i]
            for _ in range(e):
                a = tab[a]
        return a

    def conjugate(self, x: int, g: int) -> int:
        return self.mul(self.mul(self.inv[g], x), g)

    def commutator(self, a: int, b: int) -> int:
        return self.mul(self.mul(self.inv[a], self.inv[b]), self.mul(a, b))

    def element_order(self, x: int) -> int:
        n = 1
        while x != 0:
            x = self.mul(self.mul(x, x), x)
            n *= 3
        return n

    def power(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv[x], -e
        out = 0
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def gen_indices(self):
        return [self.index[self.pres.generator(i)] for i in range(self.pres.ngens)]

    def conjugacy_classes(self):
        """Partition into classes; each class a sorted tuple of indices."""
        if self._classes is not None:
            return self._classes
        seen = [False] * len(self.elements)
        classes = []
        gens = self.gen_indices()
        for start in range(len(self.elements)):
            if seen[start]:
                continue
            orbit = {start}
            frontier = [start]
            seen[start] = True
            while frontier:
                x = frontier.pop()
                for g in gens:
                    y = self.conjugate(x, g)
                    if not seen[y]:
                        seen[y] = True
                        orbit.add(y)
                        frontier.append(y)
            classes.append(tuple(sorted(orbit)))
        classes.sort(key=lambda c: (len(c), c[0]))
        self._classes = classes
        return classes

    def full_table(self):
        """Complete multiplication table; only sensible up to order 3^5."""
        if getattr(self, "_table", None) is None:
            if len(self.elements) > 3 ** 5:
                raise TooLarge("full multiplication tables are limited to order 3^5")
            self._table = [
                [self.mul(a, b) for b in range(len(self.elements))]
                for a in range(len(self.elements))
            ]
        return self._table

    def closure(self, seeds) -> frozenset:
        """Subgroup generated by the given element indices.

        Positive words suffice in a finite group, so this is a plain orbit
        of the identity under right multiplication by the seeds.
        """
        members = {0}
        frontier = [0]
        seeds = list(seeds)
        while frontier:
            x = frontier.pop()
            for s in seeds:
                y = self.mul(x, s)
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return frozenset(members)

    def normal_closure(self, seeds) -> frozenset:
        gens = self.gen_indices()
        members = self.closure(seeds)
        while True:
            extra = {self.conjugate(x, g) for x in members for g in gens} - members
            if not extra:
                return members
            members = self.closure(set(members) | extra)


_enum_cache: dict = {}


def enumerate_group(P: PcPresentation) -> EnumeratedGroup:
    if P.order() > ENUMERATION_BOUND:
        raise TooLarge("enumeration is limited to order 3^7")
    got = _enum_cache.get(P)
    if got is None:
        got = EnumeratedGroup(P)
        _enum_cache[P] = got
    return got


# ---------------------------------------------------------------------------
# the builtin family


def make_group(name: str, n: int | None = None, eps: int | None = None) -> PcPresentation:
    """Presentations for the family of groups this package studies.

    ``G``      order 3^n (n >= 4): generators A, B, C with A^3 = B^{3^{n-2}}
               = C^3 = [B,C] = 1, [B,A] = C and [C,A] = B^{eps 3^{n-3}}.
    ``G'``     the order-81 variant with [C,A] = B^-3 = A^3 (n = 4 only).
    ``E``      the non-abelian group of order 27 and exponent 3.
    ``M``      C_{3^{n-2}} + C_3, the abelian maximal subgroup of G.
    ``N``      C_{3^{n-3}} + C_3, the intersection of the maximal subgroups.
    ``P``      the maximal subgroup containing A: central extension of
               C_3 + C_3 by C_{3^{n-3}}.
    ``wreath`` C_3 wr C_3, of order 81.
    """
    if name in ("G", "G'", "Gprime"):
        if name != "G":
            if n not in (None, 4):
                raise BadParameter("the primed group exists only at order 81")
            n = 4
        if n is None or n < 4:
            raise BadParameter("family G needs n >= 4")
        if 3 ** n > ENUMERATION_BOUND:
            raise BadParameter("n is limited to 7")
        if eps not in (1, -1):
            raise BadParameter("eps must be +1 or -1")
        mB = 3 ** (n - 2)
        e = (eps * 3 ** (n - 3)) % mB
        conj = {
            (1, 0): (0, 1, 1),   # B^A = B*C
            (2, 0): (0, e, 1),   # C^A = C*B^(eps*3^(n-3))
        }
        powers = {}
        if name != "G":
            powers[0] = (0, 6, 0)   # A^3 = B^-3 = B^6
        return PcPresentation.build(("A", "B", "C"), (3, mB, 3), powers, conj)
    if name == "E":
        return PcPresentation.build(("a", "b", "c"), (3, 3, 3), None, {(1, 0): (0, 1, 1)})
    if name == "M":
        if n is None or n < 4:
            raise BadParameter("family M needs n >= 4")
        return PcPresentation.build(("B", "C"), (3 ** (n - 2), 3))
    if name == "N":
        if n is None or n < 4:
            raise BadParameter("family N needs n >= 4")
        return PcPresentation.build(("D", "C"), (3 ** (n - 3), 3))
    if name == "P":
        if n is None or n < 4:
            raise BadParameter("family P needs n >= 4")
        if eps not in (None, 1, -1):
            raise BadParameter("eps must be +1 or -1")
        e = 1 if eps is None else eps
        mD = 3 ** (n - 3)
        t = (e * 3 ** (n - 4)) % mD
        # A, C of order 3 and central D = B^3; [C,A] = D^(eps*3^(n-4))
        return PcPresentation.build(("A", "C", "D"), (3, 3, mD), None, {(1, 0): (0, 1, t)})
    if name == "wreath":
        return PcPresentation.build(
            ("x", "a", "b", "c"),
            (3, 3, 3, 3),
            None,
            {(1, 0): (0, 0, 1, 0), (2, 0): (0, 0, 0, 1), (3, 0): (0, 1, 0, 0)},
        )
    raise BadParameter(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# structural invariants


def _abelian_invariants_from_orders(enum: EnumeratedGroup, members) -> tuple:
    """Invariant factors of an abelian 3-subgroup from its order statistics.

    |{x : x^(3^i) = 1}| = 3^(sum_j min(e_j, i)) pins the exponent partition.
    """
    orders = [enum.element_order(x) for x in members]
    total = len(orders)
    logs = []
    i = 0
    while True:
        cnt = sum(1 for o in orders if o <= 3 ** i)
        e = 0
        c = cnt
        while c > 1:
            c //= 3
            e += 1
        logs.append(e)
        if cnt == total:
            break
        i += 1
    # logs[i] - logs[i-1] counts the factors of exponent >= i; the exponent
    # multiset is the conjugate partition of these differences
    diffs = [logs[i] - logs[i - 1] for i in range(1, len(logs))]
    factors = []
    for i, d in enumerate(diffs):
        nxt = diffs[i + 1] if i + 1 < len(diffs) else 0
        factors.extend([i + 1] * (d - nxt))
    factors.sort()
    return tuple(3 ** e for e in factors)


def center_subgroup(P: PcPresentation) -> frozenset:
    enum = enumerate_group(P)
    gens = enum.gen_indices()
    return frozenset(
        x for x in range(len(enum))
        if all(enum.mul(x, g) == enum.mul(g, x) for g in gens)
    )


def center(P: PcPresentation) -> FgAbGroup:
    enum = enumerate_group(P)
    factors = _abelian_invariants_from_orders(enum, center_subgroup(P))
    return FgAbGroup.from_invariant_factors(factors)


def derived_subgroup(P: PcPresentation) -> "Subgroup":
    enum = enumerate_group(P)
    gens = enum.gen_indices()
    comms = [enum.commutator(a, b) for a in gens for b in gens]
    return Subgroup(P, enum.normal_closure(comms))


def abelianization(P: PcPresentation) -> FgAbGroup:
    """Cokernel of the relation matrix on the generator lattice.

    The projection applies to exponent vectors of normal forms, which is
    legitimate because a normal form is a genuine ordered product of the
    generators.
    """
    k = P.ngens
    cols = []
    for i in range(k):
        col = [0] * k
        col[i] = P.orders[i]
        col = [c - w for c, w in zip(col, P.powers[i])]
        cols.append(col)
    for (j, i), w in P.conjugates:
        col = list(w)
        col[j] -= 1
        cols.append(col)
    return cokernel(IntMatrix.from_cols(cols, nrows=k))


def exponent(P: PcPresentation) -> int:
    enum = enumerate_group(P)
    return max(enum.element_order(x) for x in range(len(enum)))


def conjugacy_classes(P: PcPresentation):
    """Sizes of the conjugacy classes, ascending."""
    enum = enumerate_group(P)
    return sorted(len(c) for c in enum.conjugacy_classes())


def is_abelian(P: PcPresentation) -> bool:
    gens = [P.generator(i) for i in range(P.ngens)]
    return all(P.multiply(a, b) == P.multiply(b, a) for a in gens for b in gens)


# ---------------------------------------------------------------------------
# presenting explicit groups: subgroups, quotients, circle kernels


def pc_from_chain(mul, identity, chain, names=None, sort_key=None, inverse=None):
    """Build a PcPresentation from an explicit group along a cyclic chain.

    ``chain`` descends from the whole group to {identity}; every successive
    quotient must be cyclic.  Levels with trivial quotient are skipped.
    Returns (presentation, dict element -> normal form).
    """
    if sort_key is None:
        sort_key = lambda x: x
    if inverse is None:
        def inverse(x):
            prev = identity
            acc = x
            while acc != identity:
                prev = acc
                acc = mul(acc, x)
            return prev if x != identity else identity

    levels = []   # (generator, inverse generator, relative order, tail set)
    for top, bottom in zip(chain, chain[1:]):
        if len(top) == len(bottom):
            continue
        m = len(top) // len(bottom)
        gen = None
        for x in sorted((y for y in top if y not in bottom), key=sort_key):
            if m == 3:
                gen = x
                break
            y = identity
            for _ in range(m // 3):
                y = mul(y, x)
            if y not in bottom:
                gen = x
                break
        if gen is None:
            raise InconsistentPresentation("chain quotient is not cyclic")
        levels.append((gen, inverse(gen), m, bottom))
    k = len(levels)

    def sift(g):
        out = [0] * k
        for i, (gen, gen_inv, m, bottom) in enumerate(levels):
            e = 0
            while g not in bottom:
                g = mul(gen_inv, g)
                e += 1
                if e > m:
                    raise InconsistentPresentation("sifting escaped the chain")
            out[i] = e
        if g != identity:
            raise InconsistentPresentation("chain does not end at the identity")
        return tuple(out)

    powers = {}
    conjugates = {}
    for i, (gen, gen_inv, m, _) in enumerate(levels):
        p = identity
        for _ in range(m):
            p = mul(p, gen)
        w = sift(p)
        if any(w):
            powers[i] = w
        for j in range(i + 1, k):
            other = levels[j][0]
            w = sift(mul(mul(gen_inv, other), gen))
            if any(w[: i + 1]):
                raise InconsistentPresentation("conjugate escapes the chain")
            conjugates[(j, i)] = w
    if names is None:
        names = tuple(f"g{i + 1}" for i in range(k))
    pres = PcPresentation.build(
        names, tuple(m for _, _, m, _ in levels), powers, conjugates
    )
    word_of = {x: sift(x) for x in chain[0]}
    return pres, word_of


@dataclass
class Subgroup:
    """A subgroup of an enumerated pc-group, with an induced presentation.

    The presentation comes from sifting along the intersection of the
    subgroup with the ambient polycyclic chain.
    """

    ambient: PcPresentation
    members: frozenset
    pres: PcPresentation = field(init=False)
    word_of: dict = field(init=False)

    def __post_init__(self):
        enum = enumerate_group(self.ambient)
        k = self.ambient.ngens
        chain = []
        for lvl in range(k + 1):
            chain.append(frozenset(
                x for x in self.members
                if all(enum.elements[x][t] == 0 for t in range(lvl))
            ))
        self.pres, self.word_of = pc_from_chain(
            enum.mul, 0, chain, sort_key=lambda idx: enum.elements[idx]
        )

    def order(self) -> int:
        return len(self.members)

    def contains(self, word: tuple) -> bool:
        enum = enumerate_group(self.ambient)
        return enum.index[word] in self.members


def subgroup_generated(P: PcPresentation, words) -> Subgroup:
    enum = enumerate_group(P)
    return Subgroup(P, enum.closure([enum.index[tuple(w)] for w in words]))


def maximal_subgroups(P: PcPresentation):
    """All index-3 subgroups, as kernels of mod-3 functionals on G_ab."""
    if P.order() > 3 ** 6:
        raise TooLarge("maximal subgroup enumeration is limited to order 3^6")
    enum = enumerate_group(P)
    ab = abelianization(P)
    ncoords = len(ab.torsion)
    forms = []
    for v in product(range(3), repeat=ncoords):
        if any(v) and next(x for x in v if x) == 1:
            forms.append(v)
    out = []
    for v in forms:
        members = set()
        for x in range(len(enum)):
            co = ab.coords(enum.elements[x])
            if sum(a * c for a, c in zip(v, co)) % 3 == 0:
                members.add(x)
        if len(members) * 3 == len(enum):
            out.append(Subgroup(P, frozenset(members)))
    out.sort(key=lambda H: sorted(H.members))
    return out


def quotient_presentation(P: PcPresentation, normal_members: frozenset) -> PcPresentation:
    """Presentation of P / N for a normal subgroup given by its elements."""
    enum = enumerate_group(P)
    rep = {}
    for x in range(len(enum)):
        rep[x] = min(enum.mul(x, h) for h in normal_members)

    def qmul(a, b):
        return rep[enum.mul(a, b)]

    k = P.ngens
    chain = []
    for lvl in range(k + 1):
        chain.append(frozenset(
            rep[x] for x in range(len(enum))
            if all(enum.elements[x][t] == 0 for t in range(lvl))
        ))
    pres, _ = pc_from_chain(qmul, rep[0], chain)
    return pres


def normal_subgroups(P: PcPresentation):
    """All normal subgroups, as frozensets of element indices.

    Every normal subgroup is a join of subgroups generated by single
    conjugacy classes (each of which is normal, since conjugation permutes a
    class), so the lattice is the join-closure of the class-generated ones.
    This is exploratory machinery for comparing the twisted pair of groups
    subgroup by subgroup; it is not on any verification path.
    """
    if P.order() > 3 ** 5:
        raise TooLarge("normal subgroup enumeration is limited to order 3^5")
    enum = enumerate_group(P)
    table = enum.full_table()

    def close(seeds):
        members = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            row = table[x]
            for s in seeds:
                y = row[s]
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return frozenset(members)

    subs = {frozenset([0]): ()}
    for c in enum.conjugacy_classes():
        s = close(c)
        subs.setdefault(s, tuple(c))
    frontier = list(subs.items())
    while frontier:
        s1, g1 = frontier.pop()
        for s2, g2 in list(subs.items()):
            if s1 <= s2 or s2 <= s1:
                continue
            j = close(g1 + g2)
            if j not in subs:
                subs[j] = g1 + g2
                frontier.append((j, g1 + g2))
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


# ---------------------------------------------------------------------------
# isomorphism testing


def _element_signature(enum: EnumeratedGroup):
    """Per-element invariant: (order, class size, class size of the cube)."""
    cls_of = {}
    for c in enum.conjugacy_classes():
        for x in c:
            cls_of[x] = len(c)
    sig = []
    for x in range(len(enum)):
        cube = enum.mul(enum.mul(x, x), x)
        sig.append((enum.element_order(x), cls_of[x], cls_of[cube]))
    return sig


def group_fingerprint(P: PcPresentation) -> dict:
    """Cheap isomorphism invariants used as a pre-filter."""
    enum = enumerate_group(P)
    order_counts = {}
    for x in range(len(enum)):
        o = enum.element_order(x)
        order_counts[o] = order_counts.get(o, 0) + 1
    return {
        "order": P.order(),
        "exponent": exponent(P),
        "center": center(P).torsion,
        "abelianization": abelianization(P).torsion,
        "class_sizes": tuple(conjugacy_classes(P)),
        "order_counts": tuple(sorted(order_counts.items())),
    }


def isomorphic(P1: PcPresentation, P2: PcPresentation):
    """Exact isomorphism test; returns (flag, witness generator map or None).

    Invariant fingerprints filter first; then a backtracking search assigns
    images to the pc generators of P1 from last to first, so that every
    relation can be checked as soon as its participants are placed.  A
    partial assignment must also map the polycyclic tail subgroup onto a
    subgroup of the right order, which prunes non-injective branches early.
    """
    if P1.order() > 3 ** 6 or P2.order() > 3 ** 6:
        raise TooLarge("isomorphism testing is limited to order 3^6")
    if group_fingerprint(P1) != group_fingerprint(P2):
        return False, None
    enum1, enum2 = enumerate_group(P1), enumerate_group(P2)
    sig1, sig2 = _element_signature(enum1), _element_signature(enum2)
    k = P1.ngens
    gen_sigs = [sig1[enum1.index[P1.generator(i)]] for i in range(k)]
    candidates = [
        [x for x in range(len(enum2)) if sig2[x] == gen_sigs[i]] for i in range(k)
    ]
    tail_orders = [prod(P1.orders[i:]) for i in range(k)] + [1]

    def eval_word(word, images):
        out = 0
        for i in range(k):
            if word[i]:
                out = enum2.mul(out, enum2.power(images[i], word[i]))
        return out

    def relations_hold_at(i, images):
        if enum2.power(images[i], P1.orders[i]) != eval_word(P1.powers[i], images):
            return False
        for j in range(i + 1, k):
            w = P1._conj_word(j, i)
            conj = enum2.mul(enum2.mul(enum2.inv[images[i]], images[j]), images[i])
            if w is None:
                if conj != images[j]:
                    return False
            elif conj != eval_word(w, images):
                return False
        return True

    images = [None] * k

    def search(i):
        if i < 0:
            return True
        for cand in candidates[i]:
            images[i] = cand
            if relations_hold_at(i, images):
                if len(enum2.closure(images[i:])) == tail_orders[i]:
                    if search(i - 1):
                        return True
        images[i] = None
        return False

    if search(k - 1):
        witness = {P1.names[i]: enum2.elements[images[i]] for i in range(k)}
        return True, witness
    return False, None


# ---------------------------------------------------------------------------
# the ambient 1-dimensional compact group


@dataclass(frozen=True)
class LieElement:
    """Element X^i Y^j Z^k t of the ambient group; t = exp(2*pi*I*s).

    The presentation is X^3 = Y^3 = Z^3 = 1, T central, [Y,Z] = 1,
    [Y,X] = Z, [Z,X] = omega with omega = exp(2*pi*I/3); every element has
    the stated normal form, and ``s`` is an exact rational mod 1 with
    3-power denominator.
    """

    i: int
    j: int
    k: int
    s: Fraction

    @staticmethod
    def make(i, j, k, s) -> "LieElement":
        return LieElement(i % 3, j % 3, k % 3, Fraction(s) % 1)

    def __mul__(self, other: "LieElement") -> "LieElement":
        # X^-i2 (Y^j1 Z^k1) X^i2 = Y^j1 Z^(k1 + i2 j1) omega^(i2 k1 + C(i2,2) j1)
        i2, j1, k1 = other.i, self.j, self.k
        phase = Fraction(i2 * k1 + j1 * (i2 * (i2 - 1) // 2), 3)
        return LieElement.make(
            self.i + other.i,
            self.j + other.j,
            self.k + other.k + i2 * j1,
            self.s + other.s + phase,
        )

    def inverse(self) -> "LieElement":
        if self == LIE_IDENTITY:
            return self
        prev, acc = self, self * self
        while acc != LIE_IDENTITY:
            prev, acc = acc, acc * self
        return prev

    def sort_key(self):
        return (self.i, self.j, self.k, self.s)


LIE_IDENTITY = LieElement(0, 0, 0, Fraction(0))


def lie_generators(n: int, eps: int):
    """The triple (X, Y*eta^eps, Z) generating an order-3^n subgroup,
    where eta = exp(2*pi*I/3^(n-2))."""
    eta = Fraction(1, 3 ** (n - 2))
    return (
        LieElement.make(1, 0, 0, 0),
        LieElement.make(0, 1, 0, eps * eta),
        LieElement.make(0, 0, 1, 0),
    )


def lie_subgroup_elements(gens):
    """Closure of a set of LieElements, provided it stays finite and small."""
    members = {LIE_IDENTITY}
    frontier = [LIE_IDENTITY]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g
            if y not in members:
                if len(members) > ENUMERATION_BOUND:
                    raise TooLarge("closure exceeded the enumeration bound")
                members.add(y)
                frontier.append(y)
    return members


@dataclass(frozen=True)
class CircleHom:
    """c_delta1 * delta1 + c_alpha * alpha + c_beta * beta as a map to T.

    On X^i Y^j Z^k t the three basis homomorphisms evaluate to t^3, omega^i
    and omega^j respectively; the alpha and beta coefficients only matter
    mod 3.
    """

    c_delta1: int
    c_alpha: int
    c_beta: int

    def value(self, g: LieElement) -> Fraction:
        """The image of ``g`` in T, as a rational mod 1."""
        return (3 * self.c_delta1 * g.s
                + Fraction(self.c_alpha * g.i + self.c_beta * g.j, 3)) % 1


def kernel_elements(h: CircleHom):
    if h.c_delta1 == 0:
        raise InfiniteKernel("the kernel is finite only when the delta1 coefficient is nonzero")
    c = abs(h.c_delta1)
    out = set()
    for i, j, k in product(range(3), repeat=3):
        base = -Fraction(h.c_alpha * i + h.c_beta * j, 3)
        for m in range(3 * c):
            g = LieElement.make(i, j, k, (base + m) / (3 * h.c_delta1))
            assert h.value(g) == 0
            out.add(g)
    return sorted(out, key=LieElement.sort_key)


def kernel_of_circle_hom(h: CircleHom) -> PcPresentation:
    """The finite kernel of ``h``, materialised and re-presented.

    Raises InfiniteKernel when the delta1 coefficient vanishes, and
    BadParameter when the kernel is not a 3-group (coefficient with a factor
    prime to 3), since presentations here carry 3-power relative orders.
    """
    if h.c_delta1 == 0:
        raise InfiniteKernel("the kernel is finite only when the delta1 coefficient is nonzero")
    if not _is_power_of_3(abs(h.c_delta1)):
        raise BadParameter("kernel is a 3-group only for a 3-power delta1 coefficient")
    elems = kernel_elements(h)
    whole = frozenset(elems)
    assert len(whole) == 27 * 3 * abs(h.c_delta1)
    chain = [
        whole,
        frozenset(g for g in elems if g.i == 0),
        frozenset(g for g in elems if g.i == 0 and g.j == 0),
        frozenset(g for g in elems if g.i == 0 and g.j == 0 and g.k == 0),
        frozenset([LIE_IDENTITY]),
    ]
    pres, _ = pc_from_chain(
        lambda a, b: a * b,
        LIE_IDENTITY,
        chain,
        names=("x1", "x2", "x3", "t"),
        sort_key=LieElement.sort_key,
        inverse=lambda g: g.inverse(),
    )
    return pres
