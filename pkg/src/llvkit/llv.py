"""Bracket closure of Lefschetz operators and the structure-theorem checks:
the degree (2,0,-2) decomposition, Killing-form identification of the
closure with so of the degree-2 form plus a hyperbolic plane, the special
orthogonal actions of rank 10 and 6, Weil operators, derivations, and the
subalgebra generated by degree 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .lefschetz import (complete_sl2, cup_operator, sigma_bar_sl2,
                        sigma_sl2, weight_operator_matrix)
from .linalg import (IntSpan, Matrix, Span, SparseEchelon,
                     integer_eigenspaces, symmetric_signature)
from .models import spanning_hl_classes
from .reporting import CheckResult
from .rings import BigradedAlgebra, GradedAlgebra
from .scalars import Gauss, rat_sqrt

# -- sparse fraction-free span over the vectorized matrix space ------------


def _to_sparse(mat: Matrix):
    out = {}
    den = 1
    for r in range(mat.nrows):
        for c in range(mat.ncols):
            v = mat[r, c]
            if v:
                f = Fraction(v)
                den = den * f.denominator // gcd(den, f.denominator)
    for r in range(mat.nrows):
        row = {}
        for c in range(mat.ncols):
            v = mat[r, c]
            if v:
                row[c] = int(Fraction(v) * den)
        if row:
            out[r] = row
    return out


def _sparse_bracket(a, b):
    """Commutator of sparse integer matrices given as row dicts."""
    out = {}
    for r, arow in a.items():
        for k, av in arow.items():
            brow = b.get(k)
            if brow:
                dest = out.setdefault(r, {})
                for c, bv in brow.items():
                    val = dest.get(c, 0) + av * bv
                    if val:
                        dest[c] = val
                    elif c in dest:
                        del dest[c]
    for r, brow in b.items():
        for k, bv in brow.items():
            arow = a.get(k)
            if arow:
                dest = out.setdefault(r, {})
                for c, av in arow.items():
                    val = dest.get(c, 0) - bv * av
                    if val:
                        dest[c] = val
                    elif c in dest:
                        del dest[c]
    return {r: row for r, row in out.items() if row}


def _vectorize(sp, n):
    return {r * n + c: v for r, row in sp.items() for c, v in row.items()}


@dataclass
class MatrixLieAlgebra:
    """Bracket-closed span of matrices with a canonical basis.

    Internally the canonical rows are mirrored as primitive-integer sparse
    matrices (``_int_rows`` with per-row scale) so brackets and membership
    tests run on integer dictionaries instead of dense matrices.
    """

    ambient: int
    basis: list               # list of Matrix, canonical order
    pivots: list              # vectorized pivot index per basis element
    _rows: list               # canonical sparse rows (exact field values)
    _pivot_pos: dict = None
    _int_rows: list = None    # sparse int matrix form per basis element
    _int_scale: list = None   # basis[i] = _int_rows[i] / _int_scale[i]

    @property
    def dim(self):
        return len(self.basis)

    def _ensure_int_rows(self):
        if self._int_rows is not None:
            return
        self._int_rows, self._int_scale = [], []
        n = self.ambient
        for row in self._rows:
            den = 1
            rational = True
            for v in row.values():
                if isinstance(v, Gauss):
                    rational = False
                    break
                den = den * v.denominator // gcd(den, v.denominator)
            if not rational:
                self._int_rows.append(None)
                self._int_scale.append(None)
                continue
            sp = {}
            for k, v in row.items():
                sp.setdefault(k // n, {})[k % n] = int(v * den)
            self._int_rows.append(sp)
            self._int_scale.append(Fraction(den))

    def coords_vec(self, vec):
        """Coefficients on the canonical basis from a sparse vectorized
        dict; None when outside the span.  Canonical rows vanish at every
        pivot column but their own, so coefficients read off directly."""
        if self._pivot_pos is None:
            self._pivot_pos = {p: i for i, p in enumerate(self.pivots)}
        vec = {k: v for k, v in vec.items() if v}
        coeffs = [Fraction(0)] * len(self.pivots)
        for k, v in vec.items():
            i = self._pivot_pos.get(k)
            if i is not None:
                coeffs[i] = v
        for i, c in enumerate(coeffs):
            if c:
                for k, val in self._rows[i].items():
                    nv = vec.get(k, 0) - c * val
                    if nv:
                        vec[k] = nv
                    elif k in vec:
                        del vec[k]
        if vec:
            return None
        return tuple(coeffs)

    def coords(self, mat: Matrix):
        """Coefficients on the canonical basis; None when outside the span."""
        n = self.ambient
        vec = {}
        for r in range(n):
            row = mat.row(r)
            for c, v in enumerate(row):
                if v:
                    vec[r * n + c] = v
        return self.coords_vec(vec)

    def contains(self, mat: Matrix) -> bool:
        return self.coords(mat) is not None

    def bracket_coords(self, i: int, j: int):
        """Coordinates of [basis_i, basis_j]; None when outside the span."""
        self._ensure_int_rows()
        if self._int_rows[i] is None or self._int_rows[j] is None:
            return self.coords(self.basis[i].commutator(self.basis[j]))
        br = _sparse_bracket(self._int_rows[i], self._int_rows[j])
        coords = self.coords_vec(_vectorize(br, self.ambient))
        if coords is None:
            return None
        scale = self._int_scale[i] * self._int_scale[j]
        return tuple(c / scale for c in coords)

    def ad_coords(self, sp, scale=Fraction(1)):
        """Coordinates of [x, basis_j] for sparse-int x, for every j."""
        self._ensure_int_rows()
        cols = []
        for j in range(self.dim):
            if self._int_rows[j] is None:
                return None
            br = _sparse_bracket(sp, self._int_rows[j])
            coords = self.coords_vec(_vectorize(br, self.ambient))
            if coords is None:
                return None
            s = scale * self._int_scale[j]
            cols.append(tuple(c / s for c in coords))
        return cols

    def verify_closure(self) -> bool:
        """Exhaustive [b_i, b_j] membership check (quadratic in dim)."""
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.bracket_coords(i, j) is None:
                    return False
        return True


def lie_closure(generators) -> MatrixLieAlgebra:
    """Smallest bracket-closed subspace containing the generators.

    Iterates span <- span + [span, span] to stabilization; realized by
    bracketing every newly accepted element against the generators, which
    spans the same algebra (right-nested brackets span the closure).
    Rational generators run on a fraction-free sparse fast path.
    """
    gens = [g if isinstance(g, Matrix) else Matrix(g) for g in generators]
    if not gens:
        raise ValueError("lie_closure needs at least one generator")
    n = gens[0].nrows
    for g in gens:
        if g.shape() != (n, n):
            raise ValueError("generators must be square matrices of equal size")
    rational = all(not isinstance(v, Gauss) for g in gens
                   for row in g.rows for v in row)
    if rational:
        return _lie_closure_int(gens, n)
    return _lie_closure_generic(gens, n)


_FILTER_PRIME = 2147483647      # Mersenne prime 2^31 - 1


class _ModSpan:
    """Row span modulo a fixed prime, on dense numpy rows.

    Used only as a fast membership filter inside the integer closure: a
    candidate that stays nonzero after modular elimination is certainly
    independent over Q (the modular basis has full rank by construction),
    while a candidate that dies modulo p is treated as dependent and that
    treatment is certified exactly afterwards.
    """

    def __init__(self, length):
        import numpy
        self.np = numpy
        self.length = length
        self.rows = []
        self.pivots = []

    def reduce(self, dense_ints):
        np = self.np
        p = _FILTER_PRIME
        v = np.array([x % p for x in dense_ints], dtype=np.int64)
        for row, piv in zip(self.rows, self.pivots):
            c = int(v[piv])
            if c:
                v = (v - c * row) % p
        return v

    def add(self, dense_ints) -> bool:
        np = self.np
        p = _FILTER_PRIME
        v = self.reduce(dense_ints)
        nz = np.nonzero(v)[0]
        if not len(nz):
            return False
        piv = int(nz[0])
        inv = pow(int(v[piv]), p - 2, p)
        v = (v * inv) % p
        at = 0
        while at < len(self.pivots) and self.pivots[at] < piv:
            at += 1
        self.rows.insert(at, v)
        self.pivots.insert(at, piv)
        return True


def _lie_closure_int(gens, n):
    sparse_gens = [_gcd_normalize_rows(_to_sparse(g)) for g in gens]
    mod_span = _ModSpan(n * n)
    accepted = []
    queue = []

    def densify(sp):
        dense = [0] * (n * n)
        for r, row in sp.items():
            base = r * n
            for c, v in row.items():
                dense[base + c] = v
        return dense

    for sp in sparse_gens:
        if sp and mod_span.add(densify(sp)):
            accepted.append(sp)
            queue.append(sp)
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for g in sparse_gens:
            b = _sparse_bracket(g, x)
            if not b:
                continue
            b = _gcd_normalize_rows(b)
            if mod_span.add(densify(b)):
                accepted.append(b)
                queue.append(b)

    # exact canonical basis from the accepted vectors (each certified
    # independent over Q by the modular full-rank argument)
    span = SparseEchelon()
    for sp in accepted:
        if not span.add(_vectorize(sp, n)):
            raise RuntimeError("modular filter accepted a dependent vector")
    rows, pivots = span.canonical()
    basis = []
    for row in rows:
        grid = [[Fraction(0)] * n for _ in range(n)]
        for k, v in row.items():
            grid[k // n][k % n] = v
        basis.append(Matrix(grid, ncols=n))
    algebra = MatrixLieAlgebra(n, basis, pivots, rows)
    # exact certificate: the span is ad(g)-invariant for every generator,
    # hence bracket-closed and equal to the generated algebra
    for g in sparse_gens:
        if algebra.ad_coords(g) is None:
            raise RuntimeError(
                "closure is not ad-invariant: the modular filter dropped "
                "an element; rerun with a different filter prime")
    return algebra


def _gcd_normalize_rows(sp):
    g = 0
    for row in sp.values():
        for v in row.values():
            g = gcd(g, abs(v))
            if g == 1:
                return sp
    if g > 1:
        return {r: {c: v // g for c, v in row.items()} for r, row in sp.items()}
    return sp


def _lie_closure_generic(gens, n):
    span = Span(n * n)
    queue = []

    def flat(mat):
        return [mat[r, c] for r in range(n) for c in range(n)]

    for g in gens:
        if span.add(flat(g)):
            queue.append(g)
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for g in gens:
            b = g.commutator(x)
            if span.add(flat(b)):
                queue.append(b)
    sub = span.to_subspace()
    basis = []
    rows = []
    for vec, p in zip(sub.basis, sub.pivots):
        grid = [[vec[r * n + c] for c in range(n)] for r in range(n)]
        basis.append(Matrix(grid, ncols=n))
        rows.append({k: v for k, v in enumerate(vec) if v})
    return MatrixLieAlgebra(n, basis, list(sub.pivots), rows)


# -- structure checks -------------------------------------------------------


class DecompositionError(ValueError):
    """The adjoint weight decomposition left the expected eigenvalues."""


def ad_grading(algebra: MatrixLieAlgebra, h: Matrix):
    """Split the algebra into ad(h)-eigenspaces with eigenvalues 2, 0, -2."""
    admat = _ad_matrix(algebra, h)
    try:
        spaces = integer_eigenspaces(admat, [2, 0, -2])
    except ValueError as exc:
        raise DecompositionError(f"decomposition violated: {exc}") from exc
    out = {}
    for lam in (2, 0, -2):
        vecs = []
        sub = spaces.get(lam)
        if sub is not None:
            for coeffs in sub.basis:
                vecs.append(_combine(algebra, coeffs))
        out[lam] = vecs
    return out[2], out[0], out[-2]


def _mat_to_sparse_int(mat: Matrix):
    den = 1
    for row in mat.rows:
        for v in row:
            if v:
                if isinstance(v, Gauss):
                    return None, None
                den = den * v.denominator // gcd(den, v.denominator)
    sp = {}
    for r in range(mat.nrows):
        row = {}
        for c, v in enumerate(mat.row(r)):
            if v:
                row[c] = int(v * den)
        if row:
            sp[r] = row
    return sp, Fraction(den)


def _ad_matrix(algebra: MatrixLieAlgebra, x: Matrix) -> Matrix:
    algebra._ensure_int_rows()
    sp, scale = _mat_to_sparse_int(x)
    if sp is not None and all(r is not None for r in algebra._int_rows):
        cols = algebra.ad_coords(sp, scale)
        if cols is None:
            raise ValueError("element does not normalize the algebra")
    else:
        cols = []
        for b in algebra.basis:
            coords = algebra.coords(x.commutator(b))
            if coords is None:
                raise ValueError("element does not normalize the algebra")
            cols.append(coords)
    return Matrix.from_cols(cols, nrows=algebra.dim) if cols else Matrix([], ncols=0)


def _combine(algebra: MatrixLieAlgebra, coeffs) -> Matrix:
    n = algebra.ambient
    grid = [[Fraction(0)] * n for _ in range(n)]
    for c, b in zip(coeffs, algebra.basis):
        if c:
            for r in range(n):
                row = b.row(r)
                for col, v in enumerate(row):
                    if v:
                        grid[r][col] = grid[r][col] + c * v
    return Matrix(grid, ncols=n)


def dual_lefschetz_commute(ring: GradedAlgebra, a, b) -> bool:
    """[Lam_a, Lam_b] = 0 for two Hard Lefschetz degree-2 classes."""
    ta = complete_sl2(ring, a)
    tb = complete_sl2(ring, b)
    return ta.Lam.matrix().commutator(tb.Lam.matrix()).is_zero()


def weil_operator(ring: BigradedAlgebra) -> Matrix:
    """[L_gamma, Lam_gamma'] for gamma = sigma + sigma-bar and gamma' its
    imaginary partner; asserted equal to i(H_sigma - H_sigma-bar)."""
    if ring.field != "gaussian":
        raise ValueError("the Weil operator needs the field extended by i")
    sig, sigb = ring.sigma(), ring.sigma_bar()
    gamma = ring.add(sig, sigb)
    gamma_p = ring.scale(tuple(a - b for a, b in zip(sig, sigb)), Gauss(0, -1))
    l_gamma = cup_operator(ring, gamma).matrix()
    tri = complete_sl2(ring, gamma_p)
    c_op = l_gamma.commutator(tri.Lam.matrix())
    n = ring.symplectic_n()
    hs = weight_operator_matrix(ring, [p - n for p, _ in ring.bidegrees])
    hsb = weight_operator_matrix(ring, [q - n for _, q in ring.bidegrees])
    expected = (hs - hsb).scale(Gauss(0, 1))
    if c_op != expected:
        raise RuntimeError("Weil operator mismatch: [L_gamma, Lam_gamma'] "
                           "!= i(H_sigma - H_sigma-bar)")
    return c_op


def derivation_check(d: Matrix, ring: GradedAlgebra) -> bool:
    """True iff d(x*y) = d(x)*y + x*d(y) on all basis pairs."""
    n = ring.total_dim
    if d.shape() != (n, n):
        raise ValueError("operator must act on the total ring")
    dcols = [{k: v for k, v in enumerate(d.col(gi)) if v} for gi in range(n)]

    def apply_d(sparse_entries):
        acc = {}
        for gk, c in sparse_entries:
            for l, v in dcols[gk].items():
                nv = acc.get(l, 0) + c * v
                if nv:
                    acc[l] = nv
                elif l in acc:
                    del acc[l]
        return acc

    def mul_sparse(sparse, gj):
        acc = {}
        for gk, c in sparse.items():
            for gl, v in ring.mul_basis(gk, gj):
                nv = acc.get(gl, 0) + c * v
                if nv:
                    acc[gl] = nv
                elif gl in acc:
                    del acc[gl]
        return acc

    for gi in range(n):
        for gj in range(n):
            prod = ring.mul_basis(gi, gj)
            left = apply_d(prod)
            right = mul_sparse(dcols[gi], gj)       # d(e_i) * e_j
            for gk, c in dcols[gj].items():         # e_i * d(e_j)
                for gl, v in ring.mul_basis(gi, gk):
                    nv = right.get(gl, 0) + c * v
                    if nv:
                        right[gl] = nv
                    elif gl in right:
                        del right[gl]
            if left != right:
                return False
    return True


@dataclass
class SoReport:
    dim: int
    expected_dim: int
    killing_signature: tuple      # (compact, noncompact)
    expected_signature: tuple
    semisimple_part_dim: int
    verdict: bool

    def summary(self):
        status = "pass" if self.verdict else "fail"
        return (f"so-identification: {status} (dim {self.dim} vs "
                f"{self.expected_dim}, killing (compact, noncompact) = "
                f"{self.killing_signature} vs {self.expected_signature})")


class NotSemisimpleError(ValueError):
    pass


def so_identify(algebra: MatrixLieAlgebra, b2: int) -> SoReport:
    """Dimension and Killing-signature test against so(b2-2, 4).

    The expected algebra is so of a signature-(3, b2-3) space enlarged by
    a hyperbolic plane: real form so(b2-2, 4), with 4(b2-2) noncompact
    and C(b2-2, 2) + 6 compact directions.
    """
    expected_dim = (b2 + 2) * (b2 + 1) // 2
    dim = algebra.dim
    algebra._ensure_int_rows()
    if any(r is None for r in algebra._int_rows):
        raise ValueError("so_identify needs a rational algebra: the Killing "
                         "signature is only defined over the reals")
    derived = IntSpan(dim)
    # sparse adjoint matrices: ads[i] = {k: {j: coeff of b_k in [b_i, b_j]}}
    ads = [dict() for _ in range(dim)]
    zero = (Fraction(0),) * dim
    for i in range(dim):
        for j in range(i + 1, dim):
            coords = algebra.bracket_coords(i, j)
            if coords is None:
                raise ValueError("algebra is not bracket-closed")
            if coords != zero:
                derived.add(list(coords))
            for k, c in enumerate(coords):
                if c:
                    ads[i].setdefault(k, {})[j] = c
                    ads[j].setdefault(k, {})[i] = -c
    killing = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            # trace of ad_i ad_j = sum over (k, l) of ad_i[k][l] ad_j[l][k]
            s = Fraction(0)
            for k, row in ads[i].items():
                for l, c in row.items():
                    other = ads[j].get(l)
                    if other:
                        c2 = other.get(k)
                        if c2:
                            s += c * c2
            killing[i][j] = killing[j][i] = s
    kmat = Matrix(killing, ncols=dim)
    sig = symmetric_signature(kmat)
    if derived.dim == dim and sig[2]:
        raise NotSemisimpleError("not semisimple: Killing form degenerate on "
                                 "the derived algebra")
    compact, noncompact = sig[1], sig[0]
    expected_sig = (comb(b2 - 2, 2) + 6, 4 * (b2 - 2))
    verdict = (dim == expected_dim
               and (compact, noncompact) == expected_sig and sig[2] == 0)
    return SoReport(dim=dim, expected_dim=expected_dim,
                    killing_signature=(compact, noncompact),
                    expected_signature=expected_sig,
                    semisimple_part_dim=derived.dim, verdict=verdict)


def llv_generators(ring: GradedAlgebra, classes=None):
    """L_a, Lam_a for a fixed spanning set of non-isotropic classes."""
    form = ring.quadratic_form
    if form is None:
        raise ValueError("ring carries no degree-2 quadratic form")
    if classes is None:
        classes = spanning_hl_classes(form)
    gens = []
    for a in classes:
        tri = complete_sl2(ring, [Fraction(c) for c in a])
        gens.append(tri.L.matrix())
        gens.append(tri.Lam.matrix())
    return gens, list(classes)


def llv_closure(ring: GradedAlgebra, classes=None) -> MatrixLieAlgebra:
    gens, _ = llv_generators(ring, classes)
    return lie_closure(gens)


def so41_subalgebra(ring: GradedAlgebra, triple_classes):
    """Closure of the sl2-triples of three orthogonal positive classes.

    The three classes are rescaled to a common norm (their norm ratios
    must be rational squares), the rank-10 dimension is asserted, and all
    commutation relations K_ij = [L_i, Lam_j] of the rank-10 orthogonal
    action are checked exactly.
    """
    form = ring.quadratic_form
    if form is None:
        raise ValueError("ring carries no degree-2 quadratic form")
    if len(triple_classes) != 3:
        raise ValueError("need exactly three classes")
    ws = [tuple(Fraction(c) for c in w) for w in triple_classes]
    for i in range(3):
        if form.evaluate(ws[i]) <= 0:
            raise ValueError(f"class {i} is not positive for the form")
        for j in range(i + 1, 3):
            if form.pair(ws[i], ws[j]) != 0:
                raise ValueError(f"classes {i} and {j} are not orthogonal")
    base = form.evaluate(ws[0])
    scaled = [ws[0]]
    for i in (1, 2):
        ratio = rat_sqrt(base / form.evaluate(ws[i]))
        if ratio is None:
            raise ValueError("requires an admissible triple: norm ratios must "
                             "be rational squares")
        scaled.append(tuple(ratio * c for c in ws[i]))
    triples = [complete_sl2(ring, w) for w in scaled]
    res = CheckResult("so(4,1) relations")
    h = triples[0].H.matrix()
    ls = [t.L.matrix() for t in triples]
    lams = [t.Lam.matrix() for t in triples]
    for t in triples[1:]:
        if t.H.matrix() != h:
            res.fail("weight operators of the three triples differ")
    k = {}
    for i in range(3):
        for j in range(3):
            if i != j:
                k[(i, j)] = ls[i].commutator(lams[j])
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            if k[(i, j)] != k[(j, i)].scale(-1):
                res.fail(f"K{i}{j} != -K{j}{i}")
            if not k[(i, j)].commutator(h).is_zero():
                res.fail(f"[K{i}{j}, H] != 0")
            if k[(i, j)].commutator(ls[j]) != ls[i].scale(2):
                res.fail(f"[K{i}{j}, L{j}] != 2 L{i}")
            if k[(i, j)].commutator(lams[j]) != lams[i].scale(2):
                res.fail(f"[K{i}{j}, Lam{j}] != 2 Lam{i}")
            kk = 3 - i - j
            if not k[(i, j)].commutator(ls[kk]).is_zero():
                res.fail(f"[K{i}{j}, L{kk}] != 0")
            if not k[(i, j)].commutator(lams[kk]).is_zero():
                res.fail(f"[K{i}{j}, Lam{kk}] != 0")
            for jj in range(3):
                if jj in (i, j):
                    continue
                if k[(i, j)].commutator(k[(j, jj)]) != k[(i, jj)].scale(2):
                    res.fail(f"[K{i}{j}, K{j}{jj}] != 2 K{i}{jj}")
    algebra = lie_closure([op for t in triples for op in
                           (t.L.matrix(), t.Lam.matrix())])
    res.data["dim"] = algebra.dim
    if algebra.dim != 10:
        res.fail(f"closure dimension {algebra.dim} != 10")
    return algebra, res


def so4_symplectic(ring: BigradedAlgebra):
    """The six symplectic operators span a bracket-closed rank-6 algebra
    splitting as two commuting sl2-triples."""
    tri_s = sigma_sl2(ring)
    tri_b = sigma_bar_sl2(ring)
    six = [tri_s.L.matrix(), tri_b.L.matrix(), tri_s.Lam.matrix(),
           tri_b.Lam.matrix(), tri_s.H.matrix(), tri_b.H.matrix()]
    res = CheckResult("so(4) symplectic action")
    n2 = ring.total_dim ** 2
    span = Span(n2)
    for op in six:
        if not span.add([op[r, c] for r in range(ring.total_dim)
                         for c in range(ring.total_dim)]):
            res.fail("the six symplectic operators are linearly dependent")
    algebra = lie_closure(six)
    res.data["dim"] = algebra.dim
    if algebra.dim != 6:
        res.fail(f"closure dimension {algebra.dim} != 6")
    for a in (tri_s.L.matrix(), tri_s.Lam.matrix(), tri_s.H.matrix()):
        for b in (tri_b.L.matrix(), tri_b.Lam.matrix(), tri_b.H.matrix()):
            if not a.commutator(b).is_zero():
                res.fail("the sigma and sigma-bar triples do not commute")
    if ring.field == "gaussian":
        weil = (tri_s.H.matrix() - tri_b.H.matrix()).scale(Gauss(0, 1))
        if not algebra.contains(weil):
            res.fail("Weil operator i(H_sigma - H_sigma-bar) not in the span")
        else:
            res.data["weil_in_span"] = True
    return algebra, res


def verbitsky_component(ring: GradedAlgebra):
    """Graded dimensions of the subalgebra generated by degree 2, checked
    against the symmetric-power prediction, plus stability under every
    dual Lefschetz operator of the spanning non-isotropic classes."""
    res = CheckResult("degree-2 generated subalgebra")
    spans = {0: [ring.unit()]}
    lo2, hi2 = ring.slice_of(2)
    deg2 = [ring.basis_vector(gi) for gi in range(lo2, hi2)]
    dims = [0] * (ring.top + 1)
    dims[0] = 1
    bases = {0: [ring.unit()]}
    for k in range(2, ring.top + 1, 2):
        span = Span(ring.dims[k])
        vecs = []
        for x in bases.get(k - 2, []):
            for a in deg2:
                prod = ring.component(ring.multiply(a, x), k)
                if span.add(prod):
                    vecs.append(ring.embed(k, prod))
        dims[k] = span.dim
        bases[k] = vecs
    res.data["dims"] = [dims[k] for k in range(0, ring.top + 1, 2)]
    b2 = ring.dims[2]
    prediction = None
    if ring.top % 4 == 0:
        n = ring.top // 4
        prediction = [comb(b2 + k - 1, k) if k <= n
                      else comb(b2 + 2 * n - k - 1, 2 * n - k)
                      for k in range(2 * n + 1)]
        res.data["predicted"] = prediction
        if res.data["dims"] != prediction:
            res.fail(f"graded dims {res.data['dims']} != predicted {prediction}")
    if ring.quadratic_form is not None:
        target_spans = {}
        for k in range(0, ring.top + 1, 2):
            span = Span(ring.dims[k]) if ring.dims[k] else None
            if span is not None:
                for x in bases.get(k, []):
                    span.add(ring.component(x, k))
            target_spans[k] = span
        classes = spanning_hl_classes(ring.quadratic_form)
        for a in classes:
            tri = complete_sl2(ring, [Fraction(c) for c in a])
            lam = tri.Lam.matrix()
            for k in range(2, ring.top + 1, 2):
                tgt = target_spans.get(k - 2)
                for x in bases.get(k, []):
                    img = ring.component(lam.matvec(x), k - 2)
                    if any(img) and (tgt is None or not tgt.contains(img)):
                        res.fail(f"Lam of class {a} leaves the component "
                                 f"in degree {k}")
                        break
        res.data["lambda_stable_classes"] = len(classes)
    return res
