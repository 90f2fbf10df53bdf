"""Lefschetz operators, Hard Lefschetz tests, and exact sl2-completion.

One engine serves three gradings: the classical weight k - (top/2) on
total degree, and on bigraded rings the holomorphic weight p - n and the
antiholomorphic weight q - n.  The dual operator is produced from the
primitive decomposition with coefficient j(m - j + 1) on the j-th rung of
a length-(m+1) string, and for small rings is cross-checked against the
unique degree-(-2) solution of [L, X] = H, which is authoritative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Subspace, kernel, solve_sparse
from .reporting import CheckResult
from .rings import BigradedAlgebra, GradedAlgebra
from .scalars import to_field

SOLVE_CROSSCHECK_LIMIT = 30


class NotHLError(ValueError):
    """The given class does not satisfy Hard Lefschetz."""


class DegreeOperator:
    """Linear operator shifting the grading by a fixed even amount.

    Stored as one block per source degree in column convention: the block
    at k maps degree-k coordinates to degree-(k+shift) coordinates.
    """

    def __init__(self, ring, shift, blocks):
        self.ring = ring
        self.shift = shift
        self.blocks = dict(blocks)
        for k, blk in self.blocks.items():
            tgt = k + shift
            want_rows = ring.dims[tgt] if 0 <= tgt <= ring.top else 0
            if blk.shape() != (want_rows, ring.dims[k]):
                raise ValueError(
                    f"block at degree {k} has shape {blk.shape()}, expected "
                    f"({want_rows}, {ring.dims[k]})")
        self._matrix = None

    @staticmethod
    def from_matrix(ring, shift, mat: Matrix):
        """Wrap a full matrix, verifying it is supported on the shift."""
        n = ring.total_dim
        if mat.shape() != (n, n):
            raise ValueError("operator matrix must act on the total ring")
        blocks = {}
        for k in range(ring.top + 1):
            if not ring.dims[k]:
                continue
            lo, hi = ring.slice_of(k)
            tgt = k + shift
            if 0 <= tgt <= ring.top and ring.dims[tgt]:
                tlo, thi = ring.slice_of(tgt)
                blocks[k] = Matrix([[mat[r, c] for c in range(lo, hi)]
                                    for r in range(tlo, thi)],
                                   ncols=ring.dims[k])
        for r in range(n):
            for c in range(n):
                if mat[r, c] and ring.degree_of(r) != ring.degree_of(c) + shift:
                    raise ValueError(
                        f"matrix entry ({r},{c}) violates degree shift {shift}")
        return DegreeOperator(ring, shift, blocks)

    def matrix(self) -> Matrix:
        if self._matrix is None:
            n = self.ring.total_dim
            grid = [[Fraction(0)] * n for _ in range(n)]
            for k, blk in self.blocks.items():
                tgt = k + self.shift
                if not (0 <= tgt <= self.ring.top):
                    continue
                lo, _ = self.ring.slice_of(k)
                tlo, _ = self.ring.slice_of(tgt)
                for r in range(blk.nrows):
                    row = blk.row(r)
                    for c, val in enumerate(row):
                        if val:
                            grid[tlo + r][lo + c] = val
            self._matrix = Matrix(grid, ncols=n)
        return self._matrix

    def apply(self, x):
        return self.matrix().matvec(x)

    def compose(self, other: "DegreeOperator") -> "DegreeOperator":
        if other.ring is not self.ring:
            raise ValueError("operators live on different rings")
        return DegreeOperator.from_matrix(self.ring, self.shift + other.shift,
                                          self.matrix() * other.matrix())

    def commutator(self, other: "DegreeOperator") -> Matrix:
        return self.matrix().commutator(other.matrix())

    def __repr__(self):
        return f"DegreeOperator(shift={self.shift:+d} on {self.ring!r})"


def weight_operator_matrix(ring, weights) -> Matrix:
    n = ring.total_dim
    return Matrix([[Fraction(weights[i]) if i == j else Fraction(0)
                    for j in range(n)] for i in range(n)], ncols=n)


def classical_weights(ring: GradedAlgebra):
    """Weight k - top/2 on the degree-k piece."""
    if ring.top % 2:
        raise ValueError("classical weights need an even top degree")
    mid = ring.top // 2
    return tuple(ring.degree_of(gi) - mid for gi in range(ring.total_dim))


def holomorphic_weights(ring: BigradedAlgebra):
    n = ring.symplectic_n()
    return tuple(p - n for p, _ in ring.bidegrees)


def antiholomorphic_weights(ring: BigradedAlgebra):
    n = ring.symplectic_n()
    return tuple(q - n for _, q in ring.bidegrees)


def cup_operator(ring: GradedAlgebra, a) -> DegreeOperator:
    """Multiplication by a degree-2 class, as a shift +2 operator."""
    a_full = _as_degree2(ring, a)
    blocks = {}
    for k in range(ring.top + 1):
        if not ring.dims[k]:
            continue
        tgt = k + 2
        rows = ring.dims[tgt] if tgt <= ring.top else 0
        lo, hi = ring.slice_of(k)
        cols = []
        for gi in range(lo, hi):
            prod = ring.multiply(a_full, ring.basis_vector(gi))
            cols.append(ring.component(prod, tgt) if rows else ())
        blocks[k] = (Matrix.from_cols(cols, nrows=rows) if rows
                     else Matrix([], ncols=ring.dims[k]))
    return DegreeOperator(ring, 2, blocks)


def _as_degree2(ring, a):
    """Accept degree-2 coordinates or a full homogeneous degree-2 vector."""
    if len(a) == ring.total_dim and ring.total_dim != ring.dims[2]:
        deg = ring.homogeneous_degree(a)
        if deg not in (2, None):
            raise ValueError(f"expected a degree-2 class, got degree {deg}")
        return tuple(a)
    if len(a) != ring.dims[2]:
        raise ValueError(
            f"degree-2 class needs {ring.dims[2]} coordinates, got {len(a)}")
    return ring.embed(2, a)


# -- weight-space machinery -------------------------------------------------


def _weight_spaces(weights):
    spaces = {}
    for gi, w in enumerate(weights):
        spaces.setdefault(w, []).append(gi)
    return spaces


def _check_shift_two(mat, weights):
    for r in range(mat.nrows):
        for c in range(mat.ncols):
            if mat[r, c] and weights[r] != weights[c] + 2:
                raise ValueError("operator does not raise the weight by 2")


def _block(mat, rows_idx, cols_idx):
    return Matrix([[mat[r, c] for c in cols_idx] for r in rows_idx],
                  ncols=len(cols_idx))


def hl_test_weights(mat: Matrix, weights) -> bool:
    """L^j : V_{-j} -> V_j bijective for every j >= 1 with a nonzero side."""
    spaces = _weight_spaces(weights)
    _check_shift_two(mat, weights)
    powers = {1: mat}
    top = max((abs(w) for w in spaces), default=0)
    for j in range(2, top + 1):
        powers[j] = powers[j - 1] * mat
    for j in range(1, top + 1):
        lo = spaces.get(-j, [])
        hi = spaces.get(j, [])
        if not lo and not hi:
            continue
        if len(lo) != len(hi):
            return False
        blk = _block(powers[j], hi, lo)
        if blk.rank() != len(lo):
            return False
    return True


def hl_test(ring: GradedAlgebra, a) -> bool:
    """Classical Hard Lefschetz for a degree-2 class."""
    return hl_test_weights(cup_operator(ring, a).matrix(),
                           classical_weights(ring))


@dataclass
class Sl2Triple:
    """An exact sl2-triple (L, Lam, H) adapted to a basis-aligned grading."""

    L: DegreeOperator
    Lam: DegreeOperator
    H: DegreeOperator
    weights: tuple
    primitive: dict          # weight -> Subspace of the full ring
    adapted: dict            # weight -> (columns, inverse) for decomposition

    def check(self) -> bool:
        lm, mm, hm = self.L.matrix(), self.Lam.matrix(), self.H.matrix()
        return (lm.commutator(mm) == hm
                and hm.commutator(lm) == lm.scale(2)
                and hm.commutator(mm) == mm.scale(-2))


def complete_sl2_weights(ring, l_mat: Matrix, weights,
                         l_shift=2, crosscheck=True) -> Sl2Triple:
    """Complete a weight-raising operator to an exact sl2-triple.

    Raises NotHLError when the bijectivity conditions fail.  The dual is
    assembled from the primitive decomposition; on rings of total
    dimension <= SOLVE_CROSSCHECK_LIMIT the unique linear-system solution
    of [L, X] = H replaces it on mismatch.
    """
    n = ring.total_dim
    spaces = _weight_spaces(weights)
    if not hl_test_weights(l_mat, weights):
        raise NotHLError("not an HL class")
    top = max((abs(w) for w in spaces), default=0)
    powers = {0: Matrix.identity(n), 1: l_mat}
    for j in range(2, 2 * top + 2):
        powers[j] = powers[j - 1] * l_mat

    def lift(pw_weight, b_i):
        """Primitive basis vector as a full-ring coordinate vector."""
        vec = prim[pw_weight].basis[b_i]
        full = [Fraction(0)] * n
        for pos, gi in enumerate(spaces[pw_weight]):
            full[gi] = vec[pos]
        return full

    # primitive subspace at each weight w <= 0: ker(L^{-w+1}) inside V_w
    prim = {}
    for w, idx in spaces.items():
        if w > 0:
            continue
        m = -w
        target = spaces.get(w + 2 * (m + 1), [])   # = weight m + 2
        if target:
            prim[w] = kernel(_block(powers[m + 1], target, idx))
        else:
            prim[w] = Subspace.full(len(idx))

    lam_grid = [[Fraction(0)] * n for _ in range(n)]
    adapted = {}
    for w, idx in sorted(spaces.items()):
        cols = []
        tags = []          # (j, weight of primitive, column within prim basis)
        for j in range(max(w, 0), top + 1):
            pw_weight = w - 2 * j
            if pw_weight not in prim or prim[pw_weight].is_zero():
                continue
            if j > -pw_weight:       # the string p, Lp, ..., L^m p stops at m
                continue
            for b_i in range(prim[pw_weight].dim):
                lifted = powers[j].matvec(lift(pw_weight, b_i))
                cols.append([lifted[gi] for gi in idx])
                tags.append((j, pw_weight, b_i))
        if len(cols) != len(idx):
            raise NotHLError(
                f"primitive decomposition does not fill weight {w}: "
                f"{len(cols)} of {len(idx)}")
        tmat = Matrix.from_cols(cols, nrows=len(idx)) if idx else Matrix([], ncols=0)
        tinv = _invert(tmat)
        adapted[w] = (tags, tmat, tinv)
        # Lam sends the adapted column L^j p to j*(m - j + 1) * L^{j-1} p,
        # so Lam restricted to V_w is Lo * T^{-1} with Lo those columns.
        tgt_idx = spaces.get(w - 2, [])
        if not tgt_idx:
            continue
        lo_cols = []
        for (j, pw_weight, b_i) in tags:
            if j == 0:
                lo_cols.append([Fraction(0)] * len(tgt_idx))
                continue
            m = -pw_weight
            coef = Fraction(j * (m - j + 1))
            lowered = powers[j - 1].matvec(lift(pw_weight, b_i))
            lo_cols.append([coef * lowered[gi] for gi in tgt_idx])
        lo_mat = Matrix.from_cols(lo_cols, nrows=len(tgt_idx))
        lam_w = lo_mat * tinv
        for r_pos, gi_out in enumerate(tgt_idx):
            for c_pos, gi_in in enumerate(idx):
                lam_grid[gi_out][gi_in] = lam_w[r_pos, c_pos]

    lam_mat = Matrix(lam_grid, ncols=n)
    h_mat = weight_operator_matrix(ring, weights)

    if crosscheck and n <= SOLVE_CROSSCHECK_LIMIT:
        solved = _solve_dual(ring, l_mat, weights, spaces, h_mat)
        if solved is not None and solved != lam_mat:
            lam_mat = solved
    if l_mat.commutator(lam_mat) != h_mat:
        raise RuntimeError("sl2 completion failed: [L, Lam] != H")
    if h_mat.commutator(l_mat) != l_mat.scale(2):
        raise RuntimeError("sl2 completion failed: [H, L] != 2L")
    if h_mat.commutator(lam_mat) != lam_mat.scale(-2):
        raise RuntimeError("sl2 completion failed: [H, Lam] != -2 Lam")

    l_op = DegreeOperator.from_matrix(ring, l_shift, l_mat)
    lam_op = DegreeOperator.from_matrix(ring, -l_shift, lam_mat)
    h_op = DegreeOperator.from_matrix(ring, 0, h_mat)
    return Sl2Triple(l_op, lam_op, h_op, tuple(weights), prim, adapted)


def _invert(mat: Matrix) -> Matrix:
    from .linalg import inverse
    return inverse(mat)


def _solve_dual(ring, l_mat, weights, spaces, h_mat):
    """Unique weight-lowering solution of [L, X] = H, by exact sparse
    elimination; None when the system is inconsistent or underdetermined."""
    n = ring.total_dim
    unknowns = []
    pos = {}
    for w, idx in sorted(spaces.items()):
        tgt = spaces.get(w - 2, [])
        for gi_out in tgt:
            for gi_in in idx:
                pos[(gi_out, gi_in)] = len(unknowns)
                unknowns.append((gi_out, gi_in))
    if not unknowns:
        return Matrix.zeros(n, n) if h_mat.is_zero() else None
    gaussian = ring.field == "gaussian"
    l_rows = [{k: v for k, v in enumerate(l_mat.row(r)) if v} for r in range(n)]
    l_cols = [{k: l_mat[k, c] for k in range(n) if l_mat[k, c]} for c in range(n)]
    rows = []
    rhs = []
    for r in range(n):
        for c in range(n):
            if weights[r] != weights[c]:
                continue
            row = {}
            for k, v in l_rows[r].items():
                key = pos.get((k, c))
                if key is not None:
                    row[key] = row.get(key, 0) + v
            for k, v in l_cols[c].items():
                key = pos.get((r, k))
                if key is not None:
                    row[key] = row.get(key, 0) - v
            row = {k: v for k, v in row.items() if v}
            if row or h_mat[r, c]:
                rows.append(row)
                rhs.append(h_mat[r, c])
    sol = solve_sparse(rows, rhs, len(unknowns), exact_division=gaussian)
    if sol is None:
        return None
    grid = [[to_field(0, ring.field)] * n for _ in range(n)]
    for (gi_out, gi_in), v in zip(unknowns, sol):
        grid[gi_out][gi_in] = v
    return Matrix(grid, ncols=n)


def complete_sl2(ring: GradedAlgebra, a) -> Sl2Triple:
    """Classical sl2-triple of a Hard Lefschetz degree-2 class."""
    l_mat = cup_operator(ring, a).matrix()
    return complete_sl2_weights(ring, l_mat, classical_weights(ring))


def sigma_sl2(ring: BigradedAlgebra) -> Sl2Triple:
    """sl2-triple of the symplectic class, graded by holomorphic weight."""
    l_mat = cup_operator(ring, ring.sigma()).matrix()
    return complete_sl2_weights(ring, l_mat, holomorphic_weights(ring))


def sigma_bar_sl2(ring: BigradedAlgebra) -> Sl2Triple:
    l_mat = cup_operator(ring, ring.sigma_bar()).matrix()
    return complete_sl2_weights(ring, l_mat, antiholomorphic_weights(ring))


@dataclass
class PrimitiveDecomposition:
    """x = sum_j L^j x_j with every x_j primitive at its level."""

    x: tuple
    components: tuple        # pairs (j, full vector x_j)

    def reconstruct(self, triple: Sl2Triple, ring) -> tuple:
        total = [to_field(0, ring.field)] * ring.total_dim
        lmat = triple.L.matrix()
        for j, comp in self.components:
            vec = list(comp)
            for _ in range(j):
                vec = list(lmat.matvec(vec))
            total = [a + b for a, b in zip(total, vec)]
        return tuple(total)


def primitive_decomposition(ring, triple: Sl2Triple, x) -> PrimitiveDecomposition:
    """Decompose a weight-homogeneous element along the adapted basis."""
    if not triple.check():
        raise ValueError("invalid sl2-triple")
    weights = triple.weights
    present = {weights[gi] for gi, c in enumerate(x) if c}
    if len(present) > 1:
        raise ValueError("element is not weight-homogeneous")
    if not present:
        return PrimitiveDecomposition(tuple(x), ())
    w = present.pop()
    spaces = _weight_spaces(weights)
    idx = spaces[w]
    tags, tmat, tinv = triple.adapted[w]
    coords = tinv.matvec([x[gi] for gi in idx])
    by_j = {}
    n = len(weights)
    for (j, pw_weight, b_i), c in zip(tags, coords):
        if not c:
            continue
        vec = triple.primitive[pw_weight].basis[b_i]
        src_idx = spaces[pw_weight]
        acc = by_j.setdefault(j, [to_field(0, ring.field)] * n)
        for pos, gi in enumerate(src_idx):
            acc[gi] = acc[gi] + c * vec[pos]
    comps = tuple((j, tuple(v)) for j, v in sorted(by_j.items()))
    out = PrimitiveDecomposition(tuple(x), comps)
    if out.reconstruct(triple, ring) != tuple(x):
        raise RuntimeError("primitive decomposition failed to reconstruct")
    lmat = triple.L.matrix()
    for j, comp in comps:
        m = -(w - 2 * j)
        vec = list(comp)
        for _ in range(m + 1):
            vec = list(lmat.matvec(vec))
        if any(vec):
            raise RuntimeError("component is not primitive at its level")
    return out


def symplectic_hl_check(ring: BigradedAlgebra) -> CheckResult:
    """Blockwise symplectic Hard Lefschetz for sigma and sigma-bar."""
    res = CheckResult("symplectic hard lefschetz")
    n = ring.symplectic_n()
    ls = cup_operator(ring, ring.sigma()).matrix()
    lsb = cup_operator(ring, ring.sigma_bar()).matrix()
    piece = {}
    for gi, pq in enumerate(ring.bidegrees):
        piece.setdefault(pq, []).append(gi)
    sig_pq = ring.bidegrees[ring.sigma_index]
    if sig_pq != (2, 0):
        res.fail(f"sigma has bidegree {sig_pq}, expected (2,0)")
        return res
    powers = {0: Matrix.identity(ring.total_dim), 1: ls}
    powers_b = {0: Matrix.identity(ring.total_dim), 1: lsb}
    for j in range(2, 2 * n + 1):
        powers[j] = powers[j - 1] * ls
        powers_b[j] = powers_b[j - 1] * lsb
    checked = 0
    for (p, q), idx in sorted(piece.items()):
        if p < n:
            j = n - p
            tgt = piece.get((n + j, q), [])
            if len(tgt) != len(idx):
                res.fail(f"dim IH^({p},{q}) = {len(idx)} != {len(tgt)} = "
                         f"dim IH^({n + j},{q})")
            elif _block(powers[j], tgt, idx).rank() != len(idx):
                res.fail(f"L_sigma^{j}: ({p},{q}) -> ({n + j},{q}) not bijective")
            checked += 1
        if q < n:
            j = n - q
            tgt = piece.get((p, n + j), [])
            if len(tgt) != len(idx):
                res.fail(f"dim IH^({p},{q}) = {len(idx)} != {len(tgt)} = "
                         f"dim IH^({p},{n + j})")
            elif _block(powers_b[j], tgt, idx).rank() != len(idx):
                res.fail(f"L_sigmabar^{j}: ({p},{q}) -> ({p},{n + j}) not bijective")
            checked += 1
    res.data["blocks_checked"] = checked
    return res


def simultaneous_primitivity_check(ring: BigradedAlgebra) -> CheckResult:
    """Commutation of the two dual symplectic operators, plus the
    componentwise simultaneous-primitivity statement on basis elements."""
    res = CheckResult("simultaneous primitivity")
    tri_s = sigma_sl2(ring)
    tri_b = sigma_bar_sl2(ring)
    lam_s, lam_b = tri_s.Lam.matrix(), tri_b.Lam.matrix()
    if not lam_s.commutator(lam_b).is_zero():
        res.fail("[Lam_sigma, Lam_sigmabar] != 0")
    if not tri_s.L.matrix().commutator(lam_b).is_zero():
        res.fail("[L_sigma, Lam_sigmabar] != 0")
    if not tri_b.L.matrix().commutator(lam_s).is_zero():
        res.fail("[L_sigmabar, Lam_sigma] != 0")
    checked = 0
    for gi in range(ring.total_dim):
        x = ring.basis_vector(gi)
        if any(lam_b.matvec(x)):
            continue
        # x is sigma-bar-primitive; its sigma-components must stay so
        dec = primitive_decomposition(ring, tri_s, x)
        for _, comp in dec.components:
            if any(lam_b.matvec(comp)):
                res.fail(f"sigma-component of {ring.label_of(gi)} is not "
                         "sigma-bar-primitive")
        checked += 1
    res.data["primitive_basis_elements"] = checked
    return res
