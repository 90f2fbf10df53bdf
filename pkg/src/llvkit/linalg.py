"""Exact dense linear algebra: matrices, canonical subspaces, signatures.

Subspaces are always stored with a reduced-row-echelon basis, so equality
of subspaces is literal equality of their representations.  All routines
are pure and work over Q (Fraction) or Q(i) (Gauss).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .scalars import Gauss, as_fraction, conj


class DimensionError(ValueError):
    """Shape mismatch between exact linear-algebra objects."""


def _norm_entry(x):
    if isinstance(x, (Gauss, Fraction)):
        return x
    return Fraction(x)


class Matrix:
    """Immutable dense matrix with exact entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        data = tuple(tuple(_norm_entry(x) for x in row) for row in rows)
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise DimensionError("ragged matrix rows")
            object.__setattr__(self, "ncols", widths.pop())
        else:
            if ncols is None:
                raise DimensionError("empty matrix needs an explicit column count")
            object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def zeros(nrows, ncols):
        return Matrix([[Fraction(0)] * ncols for _ in range(nrows)], ncols=ncols)

    @staticmethod
    def identity(n):
        return Matrix([[Fraction(1 if i == j else 0) for j in range(n)]
                       for i in range(n)], ncols=n)

    @staticmethod
    def from_cols(cols, nrows=None):
        if not cols:
            if nrows is None:
                raise DimensionError("empty column list needs a row count")
            return Matrix.zeros(nrows, 0) if nrows else Matrix([], ncols=0)
        return Matrix([[col[i] for col in cols] for i in range(len(cols[0]))],
                      ncols=len(cols))

    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def __add__(self, other):
        if self.shape() != other.shape():
            raise DimensionError(f"add shape mismatch {self.shape()} vs {other.shape()}")
        return Matrix([[a + b for a, b in zip(r, s)]
                       for r, s in zip(self.rows, other.rows)], ncols=self.ncols)

    def __sub__(self, other):
        if self.shape() != other.shape():
            raise DimensionError(f"sub shape mismatch {self.shape()} vs {other.shape()}")
        return Matrix([[a - b for a, b in zip(r, s)]
                       for r, s in zip(self.rows, other.rows)], ncols=self.ncols)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = _norm_entry(c)
        return Matrix([[c * a for a in r] for r in self.rows], ncols=self.ncols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionError(
                    f"mul shape mismatch {self.shape()} vs {other.shape()}")
            bt = other.rows
            out = []
            for r in self.rows:
                acc = [Fraction(0)] * other.ncols
                for k, a in enumerate(r):
                    if a:
                        brow = bt[k]
                        acc = [x + a * y for x, y in zip(acc, brow)]
                out.append(acc)
            return Matrix(out, ncols=other.ncols)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def matvec(self, v):
        if len(v) != self.ncols:
            raise DimensionError("matvec length mismatch")
        out = []
        for r in self.rows:
            s = Fraction(0)
            for a, x in zip(r, v):
                if a and x:
                    s = s + a * x
            out.append(s)
        return tuple(out)

    def transpose(self):
        return Matrix([self.col(j) for j in range(self.ncols)], ncols=self.nrows)

    def conjugate(self):
        return Matrix([[conj(a) for a in r] for r in self.rows], ncols=self.ncols)

    def trace(self):
        if self.nrows != self.ncols:
            raise DimensionError("trace of a non-square matrix")
        s = Fraction(0)
        for i in range(self.nrows):
            s = s + self.rows[i][i]
        return s

    def is_zero(self):
        return all(not a for r in self.rows for a in r)

    def is_symmetric(self):
        return self.nrows == self.ncols and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows) for j in range(i + 1, self.ncols))

    def commutator(self, other):
        return self * other - other * self

    def power(self, k):
        if self.nrows != self.ncols:
            raise DimensionError("power of a non-square matrix")
        out = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def rank(self):
        return len(rref(self.rows)[0])

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"


def rref(rows):
    """Reduced row echelon form; returns (rref_rows, pivot_columns).

    Generic over Fraction and Gauss entries; pivots are normalized to 1
    and cleared above and below, so the output is canonical for the row
    space.  Zero rows are dropped.
    """
    work = [[_norm_entry(x) for x in r] for r in rows if any(r)]
    if not work:
        return [], []
    ncols = len(work[0])
    pivots = []
    out = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = work[r][c]
        if inv != 1:
            work[r] = [a / inv for a in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    out = [tuple(row) for row in work[:r]]
    return out, pivots


def solve(mat: Matrix, target):
    """One exact solution x of mat*x = target, or None when inconsistent."""
    if len(target) != mat.nrows:
        raise DimensionError("solve target length mismatch")
    aug = [list(r) + [t] for r, t in zip(mat.rows, target)]
    if not aug:
        return tuple([Fraction(0)] * mat.ncols)
    red, pivots = rref(aug)
    n = mat.ncols
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return tuple(x)


class Subspace:
    """A subspace of row vectors in canonical reduced-echelon form."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient, basis, pivots):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", tuple(tuple(v) for v in basis))
        object.__setattr__(self, "pivots", tuple(pivots))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @staticmethod
    def from_rows(ambient, rows):
        rows = list(rows)
        for r in rows:
            if len(r) != ambient:
                raise DimensionError("row length does not match ambient dimension")
        basis, pivots = rref(rows)
        return Subspace(ambient, basis, pivots)

    @staticmethod
    def zero(ambient):
        return Subspace(ambient, [], [])

    @staticmethod
    def full(ambient):
        return Subspace.from_rows(
            ambient, Matrix.identity(ambient).rows) if ambient else Subspace(0, [], [])

    @property
    def dim(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    def is_full(self):
        return self.dim == self.ambient

    def reduce(self, vec):
        """Residue of vec after elimination against the basis."""
        if len(vec) != self.ambient:
            raise DimensionError("vector length does not match ambient dimension")
        v = list(vec)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, vec):
        return not any(self.reduce(vec))

    def coords(self, vec):
        """Coefficients of vec on the canonical basis; None if outside."""
        if not self.contains(vec):
            return None
        return tuple(vec[p] for p in self.pivots)

    def __le__(self, other):
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def _check(self, other):
        if not isinstance(other, Subspace):
            raise TypeError("expected a Subspace")
        if self.ambient != other.ambient:
            raise DimensionError(
                f"ambient mismatch {self.ambient} vs {other.ambient}")

    def sum(self, other):
        self._check(other)
        return Subspace.from_rows(self.ambient, list(self.basis) + list(other.basis))

    def intersect(self, other):
        """Zassenhaus intersection: rref of [A|A; B|0], rows with zero left."""
        self._check(other)
        n = self.ambient
        block = [list(v) + list(v) for v in self.basis]
        block += [list(v) + [0] * n for v in other.basis]
        red, _ = rref(block)
        rows = [r[n:] for r in red if not any(r[:n])]
        return Subspace.from_rows(n, rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def kernel(mat: Matrix) -> Subspace:
    """Null space {v : mat*v = 0} as a canonical subspace."""
    n = mat.ncols
    red, pivots = rref(mat.rows)
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return Subspace.from_rows(n, basis)


def image(mat: Matrix) -> Subspace:
    """Column space of mat, canonically (as row vectors of length nrows)."""
    return Subspace.from_rows(mat.nrows, mat.transpose().rows)


def congruence_diagonalize(q: Matrix):
    """Rational congruence P*q*P^T = diag; returns (P, diagonal entries).

    Uses the (e_i + e_j) move when the remaining diagonal vanishes but an
    off-diagonal entry survives; zero diagonal entries in the output mark
    the radical of the form.
    """
    if q.nrows != q.ncols:
        raise DimensionError("diagonalization of a non-square matrix")
    a = [[as_fraction(x) for x in row] for row in q.rows]
    n = q.nrows
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise ValueError(
                    f"matrix is not symmetric at ({i},{j}): {a[i][j]} vs {a[j][i]}")
    p = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(n):
        if a[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if swap is not None:
                a[k], a[swap] = a[swap], a[k]
                for row in a:
                    row[k], row[swap] = row[swap], row[k]
                p[k], p[swap] = p[swap], p[k]
            else:
                off = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if off is None:
                    continue
                # a[k][k] becomes +-2*a[k][off] + a[off][off]; one sign works
                sign = 1 if 2 * a[k][off] + a[off][off] != 0 else -1
                for j in range(n):
                    a[k][j] = a[k][j] + sign * a[off][j]
                for i in range(n):
                    a[i][k] = a[i][k] + sign * a[i][off]
                p[k] = [x + sign * y for x, y in zip(p[k], p[off])]
        d = a[k][k]
        if d == 0:
            continue
        # Congruence step: once column k is cleared by row operations, the
        # matching column operations act trivially on the remaining block,
        # so row updates on the (k+1..) block suffice and keep it symmetric.
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f:
                for j in range(k + 1, n):
                    a[i][j] = a[i][j] - f * a[k][j]
                a[i][k] = Fraction(0)
                p[i] = [x - f * y for x, y in zip(p[i], p[k])]
    return Matrix(p, ncols=n), [a[k][k] for k in range(n)]


def symmetric_signature(q: Matrix):
    """Signature (pos, neg, null) of a rational symmetric matrix."""
    _, diag = congruence_diagonalize(q)
    pos = sum(1 for d in diag if d > 0)
    neg = sum(1 for d in diag if d < 0)
    return (pos, neg, len(diag) - pos - neg)


def inverse(mat: Matrix) -> Matrix:
    """Exact inverse of a square matrix over Q or Q(i)."""
    if mat.nrows != mat.ncols:
        raise DimensionError("inverse of a non-square matrix")
    n = mat.nrows
    aug = [list(r) + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, r in enumerate(mat.rows)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix([r[n:] for r in red], ncols=n)


def integer_eigenspaces(mat: Matrix, candidates):
    """Eigenspace per candidate integer eigenvalue; demands a full split.

    Raises unless the eigenspaces sum (directly) to the whole space,
    i.e. the operator is diagonalizable with spectrum inside candidates.
    """
    if mat.nrows != mat.ncols:
        raise DimensionError("eigenspaces of a non-square matrix")
    n = mat.nrows
    spaces = {}
    total = 0
    for lam in candidates:
        shifted = mat - Matrix.identity(n).scale(lam)
        ker = kernel(shifted)
        if ker.dim:
            spaces[lam] = ker
            total += ker.dim
    if total != n:
        raise ValueError(
            f"not diagonalizable with given spectrum: eigenspaces fill {total} of {n}")
    return spaces


def gcd_reduce(ints):
    """Divide a list of ints by its gcd in place; returns the list."""
    g = 0
    for x in ints:
        if x:
            g = gcd(g, abs(x))
            if g == 1:
                return ints
    if g > 1:
        for i, x in enumerate(ints):
            ints[i] = x // g
    return ints


def _scale_to_ints(vec):
    den = 1
    for x in vec:
        f = Fraction(x)
        den = den * f.denominator // gcd(den, f.denominator)
    return [int(Fraction(x) * den) for x in vec]


class IntSpan:
    """Incremental row span over Q via fraction-free integer elimination.

    Rows are dense integer lists normalized by gcd; pivots stay unscaled
    (not 1) until ``to_subspace`` converts the result to canonical form.
    Suited to the saturation and closure workloads where candidate rows
    arrive one at a time and most are rejected.
    """

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient):
        self.ambient = ambient
        self.rows = []            # parallel to pivots, sorted by pivot
        self.pivots = []

    @property
    def dim(self):
        return len(self.rows)

    def _reduce(self, vec):
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                lead = row[p]
                v = [lead * a - c * b for a, b in zip(v, row)]
                gcd_reduce(v)
        return v

    def residue(self, vec):
        if len(vec) != self.ambient:
            raise DimensionError("vector length does not match ambient dimension")
        if any(not isinstance(x, int) for x in vec):
            vec = _scale_to_ints(vec)
        return self._reduce(vec)

    def contains(self, vec):
        return not any(self.residue(vec))

    def add(self, vec):
        """Insert a vector; returns True when the dimension grew."""
        v = self.residue(vec)
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return False
        if v[piv] < 0:
            v = [-a for a in v]
        at = 0
        while at < len(self.pivots) and self.pivots[at] < piv:
            at += 1
        self.rows.insert(at, v)
        self.pivots.insert(at, piv)
        return True

    def to_subspace(self) -> Subspace:
        """Canonicalize: back-substitute upward, pivots normalized to 1."""
        rows = [list(r) for r in self.rows]
        for i in range(len(rows) - 1, -1, -1):
            p = self.pivots[i]
            for j in range(i):
                c = rows[j][p]
                if c:
                    lead = rows[i][p]
                    rows[j] = [lead * a - c * b for a, b in zip(rows[j], rows[i])]
                    gcd_reduce(rows[j])
        basis = []
        for row, p in zip(rows, self.pivots):
            lead = Fraction(row[p])
            basis.append(tuple(Fraction(a) / lead for a in row))
        return Subspace(self.ambient, basis, list(self.pivots))


class SparseEchelon:
    """Echelon-form span over sparse vectors (dict index -> value).

    Integer mode (default) uses fraction-free elimination with gcd
    normalization; field mode divides by pivots and accepts Fraction or
    Gauss values.  Rows keep all indices >= their pivot, so elimination
    is a single ascending sweep.
    """

    def __init__(self, exact_division=False):
        self.exact_division = exact_division
        self.rows = {}          # pivot -> dict

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec):
        v = {k: x for k, x in vec.items() if x}
        while True:
            hit = None
            for p in sorted(v):
                if p in self.rows:
                    hit = p
                    break
            if hit is None:
                return v
            row = self.rows[hit]
            c = v[hit]
            if self.exact_division:
                out = dict(v)
                for k, val in row.items():
                    nv = out.get(k, 0) - c * val
                    if nv:
                        out[k] = nv
                    elif k in out:
                        del out[k]
                v = out
            else:
                lead = row[hit]
                out = {k: lead * val for k, val in v.items()}
                for k, val in row.items():
                    nv = out.get(k, 0) - c * val
                    if nv:
                        out[k] = nv
                    elif k in out:
                        del out[k]
                g = 0
                for x in out.values():
                    g = gcd(g, abs(x))
                    if g == 1:
                        break
                if g > 1:
                    out = {k: x // g for k, x in out.items()}
                v = out

    def add(self, vec) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        if self.exact_division:
            lead = v[p]
            if lead != 1:
                v = {k: x / lead for k, x in v.items()}
        elif v[p] < 0:
            v = {k: -x for k, x in v.items()}
        self.rows[p] = v
        return True

    def canonical(self):
        """Fully reduced rows with pivots normalized to 1, sorted."""
        pivots = sorted(self.rows)
        reduced = {}
        for p in reversed(pivots):
            row = dict(self.rows[p])
            for q in sorted(row):
                if q != p and q in reduced:
                    other = reduced[q]
                    c = row[q]
                    for k, val in other.items():
                        nv = row.get(k, 0) - c * val
                        if nv:
                            row[k] = nv
                        elif k in row:
                            del row[k]
            lead = row[p]
            if self.exact_division:
                reduced[p] = ({k: v / lead for k, v in row.items()}
                              if lead != 1 else row)
            else:
                lead = Fraction(lead)
                reduced[p] = {k: Fraction(v) / lead for k, v in row.items()}
        return [reduced[p] for p in pivots], pivots


def solve_sparse(rows, rhs, n_unknowns, exact_division=False):
    """Solve a sparse linear system demanding a unique solution.

    ``rows`` are dicts over unknown indices; the right-hand side is
    appended as column ``n_unknowns``.  Returns the solution tuple, or
    None when the system is inconsistent or underdetermined.
    """
    ech = SparseEchelon(exact_division=exact_division)
    for row, b in zip(rows, rhs):
        vec = dict(row)
        if b:
            vec[n_unknowns] = -b
        if not exact_division:
            den = 1
            for x in vec.values():
                d = Fraction(x).denominator
                den = den * d // gcd(den, d)
            vec = {k: int(Fraction(x) * den) for k, x in vec.items()}
        ech.add(vec)
    reduced, pivots = ech.canonical()
    if n_unknowns in pivots:
        return None
    if len(pivots) != n_unknowns:
        return None
    sol = [Fraction(0)] * n_unknowns
    for row, p in zip(reduced, pivots):
        val = row.get(n_unknowns, 0)
        sol[p] = -val if val else Fraction(0)
    return tuple(sol)


class Span:
    """Incremental row span over any exact field, pivot-normalized rows."""

    __slots__ = ("ambient", "rows", "pivots")

    def __init__(self, ambient):
        self.ambient = ambient
        self.rows = []
        self.pivots = []

    @property
    def dim(self):
        return len(self.rows)

    def residue(self, vec):
        if len(vec) != self.ambient:
            raise DimensionError("vector length does not match ambient dimension")
        v = [_norm_entry(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        return not any(self.residue(vec))

    def add(self, vec):
        v = self.residue(vec)
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return False
        lead = v[piv]
        v = [a / lead for a in v]
        at = 0
        while at < len(self.pivots) and self.pivots[at] < piv:
            at += 1
        self.rows.insert(at, v)
        self.pivots.insert(at, piv)
        return True

    def to_subspace(self) -> Subspace:
        rows = [list(r) for r in self.rows]
        for i in range(len(rows) - 1, -1, -1):
            p = self.pivots[i]
            for j in range(i):
                c = rows[j][p]
                if c:
                    rows[j] = [a - c * b for a, b in zip(rows[j], rows[i])]
        return Subspace(self.ambient, [tuple(r) for r in rows], list(self.pivots))
