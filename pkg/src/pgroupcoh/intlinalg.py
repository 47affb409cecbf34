"""Exact integer matrix algebra and finitely generated abelian groups.

Everything here runs over arbitrary-precision Python integers; there is no
floating point anywhere in this package.  The two workhorses are

* :func:`smith_normal_form`, with a fixed pivoting rule (smallest absolute
  value, leftmost column then topmost row on ties) so that every run of the
  test suite produces bit-identical matrices, and

* :class:`FgAbGroup`, a finitely generated abelian group kept in invariant
  factor normal form together with a projection from the ambient lattice it
  was presented in.  Equality of groups is equality of normal forms.

Maps between presented groups are handled by lifting to the ambient lattices
(:func:`induced_map`, :func:`subquotient`), so kernels and cokernels of
induced homomorphisms come out exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod


class NotWellDefined(Exception):
    """A lattice map does not descend to the presented quotient groups."""


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, stored as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        assert len(self.entries) == self.rows
        assert all(len(r) == self.cols for r in self.entries)

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return IntMatrix(nrows, ncols, rows)

    @staticmethod
    def from_cols(cols, nrows=None) -> "IntMatrix":
        cols = list(cols)
        if not cols:
            return IntMatrix(nrows or 0, 0, tuple(() for _ in range(nrows or 0)))
        nrows = len(cols[0])
        return IntMatrix.from_rows(
            [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        )

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r: int, c: int) -> "IntMatrix":
        return IntMatrix(r, c, tuple(tuple(0 for _ in range(c)) for _ in range(r)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        assert self.cols == other.rows
        ot = other.transpose().entries
        return IntMatrix.from_rows(
            [
                [sum(a * b for a, b in zip(row, col)) for col in ot]
                for row in self.entries
            ]
        )

    def apply(self, vec):
        """Matrix times column vector, as a tuple."""
        assert len(vec) == self.cols
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        assert self.rows == other.rows
        return IntMatrix.from_rows(
            [self.entries[i] + other.entries[i] for i in range(self.rows)]
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_json(self):
        """Array-of-rows form used by golden fixtures."""
        return [list(r) for r in self.entries]

    @staticmethod
    def from_json(data) -> "IntMatrix":
        return IntMatrix.from_rows(data)


def det(A: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination.

    Used by the test suite as an oracle independent of the SNF code path.
    """
    assert A.rows == A.cols
    n = A.rows
    if n == 0:
        return 1
    m = [list(r) for r in A.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """U * A * V = S with U, V unimodular and S diagonal, d1 | d2 | ...

    ``U_inv`` and ``V_inv`` are carried along because several consumers need
    to move between the original and the diagonalised coordinates.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self):
        n = min(self.S.rows, self.S.cols)
        return tuple(self.S[i, i] for i in range(n))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(A: IntMatrix) -> SmithForm:
    """Smith normal form with a deterministic pivoting rule.

    The pivot is always a nonzero entry of smallest absolute value in the
    untouched block, with ties broken leftmost-column first, then topmost
    row, so repeated runs are reproducible entry for entry.

    >>> sf = smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]]))
    >>> sf.diagonal
    (1, 6)
    """
    r, c = A.rows, A.cols
    M = [list(row) for row in A.entries]
    U = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    Ui = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    V = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    Vi = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        U[i], U[k] = U[k], U[i]
        for row in Ui:
            row[i], row[k] = row[k], row[i]

    def swap_cols(j, l):
        for row in M:
            row[j], row[l] = row[l], row[j]
        for row in V:
            row[j], row[l] = row[l], row[j]
        Vi[j], Vi[l] = Vi[l], Vi[j]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        if q == 0:
            return
        M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for row in Ui:
            row[src] -= q * row[dst]

    def add_col(src, dst, q):
        if q == 0:
            return
        for row in M:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        M[i] = [-a for a in M[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    t = 0
    while t < min(r, c):
        # deterministic pivot hunt
        best = None
        for j in range(t, c):
            for i in range(t, r):
                v = M[i][j]
                if v != 0 and (best is None or abs(v) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, r):
                if M[i][t] != 0:
                    q = M[i][t] // M[t][t]
                    add_row(t, i, -q)
                    if M[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, c):
                if M[t][j] != 0:
                    q = M[t][j] // M[t][t]
                    add_col(t, j, -q)
                    if M[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            if M[t][t] < 0:
                negate_row(t)
            # enforce divisibility of the remaining block by the pivot
            d = M[t][t]
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if M[i][j] % d != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        t += 1
    return SmithForm(
        IntMatrix.from_rows(U),
        IntMatrix.from_rows(M),
        IntMatrix.from_rows(V),
        IntMatrix.from_rows(Ui),
        IntMatrix.from_rows(Vi),
    )


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a lattice basis of ker(A : Z^c -> Z^r)."""
    sf = smith_normal_form(A)
    cols = [sf.V.col(j) for j in range(sf.rank, A.cols)]
    return IntMatrix.from_cols(cols, nrows=A.cols)


def lattice_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of the column span of A."""
    sf = smith_normal_form(A)
    cols = []
    for i, d in enumerate(sf.diagonal):
        if d != 0:
            col = sf.U_inv.col(i)
            cols.append(tuple(d * x for x in col))
    return IntMatrix.from_cols(cols, nrows=A.rows)


def in_column_span(A: IntMatrix, vec, _sf=None) -> bool:
    """Exact membership of ``vec`` in the lattice spanned by A's columns."""
    sf = _sf if _sf is not None else smith_normal_form(A)
    y = sf.U.apply(vec)
    diag = sf.diagonal
    for i, v in enumerate(y):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if v != 0:
                return False
        elif v % d != 0:
            return False
    return True


def solve_in_span(A: IntMatrix, vec):
    """Integer x with A x = vec, or None if no integral solution exists."""
    sf = smith_normal_form(A)
    y = sf.U.apply(vec)
    diag = sf.diagonal
    z = [0] * A.cols
    for i, v in enumerate(y):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if v != 0:
                return None
        else:
            if v % d != 0:
                return None
            z[i] = v // d
    return sf.V.apply(z)


# ---------------------------------------------------------------------------
# finitely generated abelian groups


def _invariant_factors_from_orders(orders):
    """Recombine a multiset of cyclic orders (> 1) into invariant factors."""
    by_prime = {}
    for n in orders:
        n = int(n)
        assert n > 1
        p = 2
        while n > 1:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                by_prime.setdefault(p, []).append(e)
            p += 1 if p == 2 else 2
    for exps in by_prime.values():
        exps.sort(reverse=True)
    depth = max((len(v) for v in by_prime.values()), default=0)
    factors = []
    for i in range(depth):
        d = prod(p ** exps[i] for p, exps in by_prime.items() if i < len(exps))
        factors.append(d)
    factors.reverse()  # ascending divisibility chain d1 | d2 | ...
    return tuple(factors)


@dataclass(frozen=True)
class FgAbGroup:
    """Finitely generated abelian group in invariant factor normal form.

    ``torsion`` is the chain d1 | d2 | ... with every d_i >= 2.  The group is
    presented as a quotient of an ambient lattice Z^a: ``projection`` maps
    ambient coordinates onto group coordinates (torsion coordinates first,
    taken modulo the invariant factors, then free coordinates), and the
    columns of ``relations`` span its kernel.

    Two groups compare equal exactly when their normal forms agree; the
    ambient presentation is deliberately ignored by ``__eq__``.
    """

    free_rank: int
    torsion: tuple
    projection: IntMatrix
    relations: IntMatrix

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            assert b % a == 0, "invariant factors must form a divisibility chain"
        assert all(d >= 2 for d in self.torsion)

    @staticmethod
    def from_invariant_factors(torsion=(), free_rank=0) -> "FgAbGroup":
        torsion = tuple(int(d) for d in torsion)
        n = len(torsion) + free_rank
        proj = IntMatrix.identity(n)
        rel_cols = []
        for i, d in enumerate(torsion):
            col = [0] * n
            col[i] = d
            rel_cols.append(col)
        return FgAbGroup(free_rank, torsion, proj, IntMatrix.from_cols(rel_cols, nrows=n))

    @staticmethod
    def trivial() -> "FgAbGroup":
        return FgAbGroup.from_invariant_factors()

    @staticmethod
    def cyclic(n: int) -> "FgAbGroup":
        return FgAbGroup.from_invariant_factors((n,)) if n > 1 else FgAbGroup.trivial()

    # -- normal form ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.free_rank == other.free_rank and self.torsion == other.torsion

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __repr__(self):
        parts = ["Z"] * self.free_rank + [f"C{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self):
        """Group order, or None when the group is infinite."""
        return prod(self.torsion) if self.free_rank == 0 else None

    def torsion_order(self) -> int:
        return prod(self.torsion)

    def exponent(self):
        """Largest invariant factor; None for infinite groups."""
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def primary_decomposition(self):
        """Display helper: invariant factors split into prime powers."""
        out = []
        for d in self.torsion:
            p = 2
            while d > 1:
                if d % p == 0:
                    q = 1
                    while d % p == 0:
                        d //= p
                        q *= p
                    out.append(q)
                p += 1 if p == 2 else 2
        out.sort()
        return tuple(out)

    # -- coordinates ------------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        return self.projection.cols

    def coords(self, vec):
        """Group coordinates of an ambient lattice vector."""
        raw = self.projection.apply(vec)
        out = list(raw)
        for i, d in enumerate(self.torsion):
            out[i] %= d
        return tuple(out)

    def is_zero(self, vec) -> bool:
        return all(x == 0 for x in self.coords(vec))

    def element_order(self, vec):
        """Order of the class of ``vec``; None if infinite."""
        co = self.coords(vec)
        n = 1
        for i, d in enumerate(self.torsion):
            if co[i]:
                o = d // gcd(co[i], d)
                n = n * o // gcd(n, o)
        for x in co[len(self.torsion):]:
            if x != 0:
                return None
        return n

    def subgroup_order(self, vectors):
        """Order of the subgroup generated by classes of ambient vectors."""
        cols = [list(v) for v in vectors] + self.relations.columns()
        span = IntMatrix.from_cols(cols, nrows=self.ambient_dim)
        return subquotient(span, self.relations).order()


def cokernel(A: IntMatrix) -> FgAbGroup:
    """Z^r modulo the column span of A, in normal form with projection."""
    sf = smith_normal_form(A)
    diag = sf.diagonal
    torsion_rows = [i for i, d in enumerate(diag) if d >= 2]
    free_rows = [i for i in range(A.rows) if i >= len(diag) or diag[i] == 0]
    proj_rows = [sf.U.row(i) for i in torsion_rows] + [sf.U.row(i) for i in free_rows]
    proj = IntMatrix.from_rows(proj_rows) if proj_rows else IntMatrix(0, A.rows, ())
    return FgAbGroup(
        free_rank=len(free_rows),
        torsion=tuple(diag[i] for i in torsion_rows),
        projection=proj,
        relations=A,
    )


def subquotient(P: IntMatrix, L: IntMatrix) -> FgAbGroup:
    """The quotient colspan(P) / colspan(L); requires colspan(L) <= colspan(P).

    The result's ambient lattice is a chosen basis of colspan(P).
    """
    B = lattice_basis(P)
    if B.cols == 0:
        if not L.is_zero():
            raise NotWellDefined("denominator lattice does not sit inside the numerator")
        return FgAbGroup.trivial()
    rel_cols = []
    for col in L.columns():
        z = solve_in_span(B, col)
        if z is None:
            raise NotWellDefined("denominator lattice does not sit inside the numerator")
        rel_cols.append(z)
    rel = IntMatrix.from_cols(rel_cols, nrows=B.cols)
    return cokernel(rel)


def tensor(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    """Tensor product over Z, from the bilinear identities for cyclics."""
    orders = []
    for d in A.torsion:
        for e in B.torsion:
            g = gcd(d, e)
            if g > 1:
                orders.append(g)
    orders.extend(list(A.torsion) * B.free_rank)
    orders.extend(list(B.torsion) * A.free_rank)
    return FgAbGroup.from_invariant_factors(
        _invariant_factors_from_orders(orders), A.free_rank * B.free_rank
    )


def tor(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    """Tor_1 over Z; free parts contribute nothing."""
    orders = []
    for d in A.torsion:
        for e in B.torsion:
            g = gcd(d, e)
            if g > 1:
                orders.append(g)
    return FgAbGroup.from_invariant_factors(_invariant_factors_from_orders(orders))


def direct_sum(*groups: FgAbGroup) -> FgAbGroup:
    orders = [d for G in groups for d in G.torsion]
    rank = sum(G.free_rank for G in groups)
    return FgAbGroup.from_invariant_factors(_invariant_factors_from_orders(orders), rank)


def induced_map(f: IntMatrix, src: FgAbGroup, dst: FgAbGroup):
    """Kernel, cokernel and bijectivity of the homomorphism induced by ``f``.

    ``f`` is given on the ambient lattices.  It must map the relation lattice
    of ``src`` into the relation lattice of ``dst``; otherwise the map does
    not descend and :class:`NotWellDefined` is raised.
    """
    assert f.rows == dst.ambient_dim and f.cols == src.ambient_dim
    dst_sf = smith_normal_form(dst.relations)
    for col in src.relations.columns():
        if not in_column_span(dst.relations, f.apply(col), _sf=dst_sf):
            raise NotWellDefined("map does not send source relations into target relations")
    # kernel: preimage of the target relation lattice, modulo source relations
    big = f.hstack(IntMatrix.from_rows([[-x for x in row] for row in dst.relations.entries]))
    ker_cols = []
    kb = kernel_basis(big)
    for j in range(kb.cols):
        ker_cols.append(tuple(kb[i, j] for i in range(src.ambient_dim)))
    pre = IntMatrix.from_cols(ker_cols, nrows=src.ambient_dim)
    pre_full = pre.hstack(src.relations)
    kernel = subquotient(pre_full, src.relations)
    # cokernel: target modulo (image + target relations)
    image_plus = IntMatrix.from_cols(
        [f.apply(col) for col in IntMatrix.identity(src.ambient_dim).columns()]
        + dst.relations.columns(),
        nrows=dst.ambient_dim,
    )
    coker = cokernel(image_plus)
    # normalise the cokernel's ambient data to dst's ambient (they coincide)
    is_iso = kernel.is_trivial and coker.is_trivial
    return kernel, coker, is_iso
