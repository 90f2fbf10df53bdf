"""Perverse filtrations from isotropic classes, monodromy weight
filtrations of nilpotent operators, and their comparison.

The perverse filtration of an isotropic degree-2 class b inside degree k
is  P_m = sum over i >= 1 of  ker(L_b^(2n+m+i-k)) n im(L_b^(i-1)),
computed blockwise inside the degree-k piece with L_b^0 = identity and
kernels of nonpositive powers empty.  The weight filtration of a
nilpotent operator is built from an exact Jordan-chain sl2 decomposition
and re-verified against both defining axioms and the independent
kernel/image-sum formula.  The weak P = W comparison matches the perverse
index m against the weight index 2m + shift at one uniform shift.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .lefschetz import complete_sl2, cup_operator, hl_test
from .linalg import Matrix, Span, Subspace, kernel
from .models import isotropic_stream, vector_stream
from .reporting import CheckResult
from .rings import BigradedAlgebra, GradedAlgebra
from .scalars import Gauss, as_fraction, conj


class Filtration:
    """Increasing exhaustive flag of canonical subspaces, integer-indexed.

    Stores the jump window; below it the filtration is the zero subspace
    and above it the full space (both by construction at build time).
    """

    def __init__(self, ambient, steps, degree=None):
        self.ambient = ambient
        self.degree = degree
        self.steps = dict(sorted(steps.items()))
        if not self.steps:
            raise ValueError("a filtration needs at least one step")
        prev = None
        for m, sub in self.steps.items():
            if sub.ambient != ambient:
                raise ValueError("filtration steps live in different spaces")
            if prev is not None and not (prev <= sub):
                raise ValueError(f"filtration is not increasing at index {m}")
            prev = sub
        first = next(iter(self.steps.values()))
        last = prev
        if first.dim != 0:
            raise ValueError("filtration must start at the zero subspace")
        if last.dim != ambient:
            raise ValueError("filtration must end at the full space")

    @property
    def lo(self):
        return next(iter(self.steps))

    @property
    def hi(self):
        return next(reversed(self.steps))

    def at(self, m) -> Subspace:
        if m <= self.lo:
            return self.steps[self.lo]
        if m >= self.hi:
            return self.steps[self.hi]
        key = max(i for i in self.steps if i <= m)
        return self.steps[key]

    def dims(self):
        return {m: sub.dim for m, sub in self.steps.items()}

    def jumps(self):
        out = []
        prev = 0
        for m, sub in self.steps.items():
            if sub.dim != prev:
                out.append((m, sub.dim - prev))
                prev = sub.dim
        return out

    def __eq__(self, other):
        if not isinstance(other, Filtration) or self.ambient != other.ambient:
            return False
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return all(self.at(m) == other.at(m) for m in range(lo, hi + 1))

    def __repr__(self):
        return f"Filtration(dims={self.dims()})"


# -- perverse filtration ----------------------------------------------------


def perverse_filtration(ring: GradedAlgebra, beta, k: int,
                        use_gaussian=False) -> Filtration:
    """The isotropic-class filtration inside the degree-k piece."""
    form = ring.quadratic_form
    if form is None:
        raise ValueError("ring carries no degree-2 quadratic form")
    beta = tuple(beta)
    if not any(beta):
        raise ValueError("beta must be a nonzero isotropic class")
    if form.evaluate(beta) != 0:
        raise ValueError("beta must be isotropic for the degree-2 form")
    if ring.top % 4:
        raise ValueError("perverse filtration needs top degree 4n")
    two_n = ring.top // 2
    lmat = cup_operator(ring, beta).matrix()
    dim_k = ring.dims[k]
    lo_k, hi_k = ring.slice_of(k)
    nil = _nilpotency_index(lmat)

    powers = {0: Matrix.identity(ring.total_dim), 1: lmat}
    for j in range(2, nil + 1):
        powers[j] = powers[j - 1] * lmat

    def power(j):
        if j > nil:
            return Matrix.zeros(ring.total_dim, ring.total_dim)
        return powers[j]

    def kernel_in_degree(e):
        """ker(L^e) inside degree k, in degree-k coordinates."""
        if e <= 0:
            return Subspace.zero(dim_k)
        if e >= nil or k + 2 * e > ring.top:
            return Subspace.full(dim_k)
        pw = power(e)
        tgt_lo, tgt_hi = ring.slice_of(k + 2 * e)
        blk = Matrix([[pw[r, c] for c in range(lo_k, hi_k)]
                      for r in range(tgt_lo, tgt_hi)], ncols=dim_k)
        return kernel(blk)

    def image_in_degree(i_minus_1):
        """im(L^(i-1)) inside degree k, in degree-k coordinates."""
        if i_minus_1 == 0:
            return Subspace.full(dim_k)
        src = k - 2 * i_minus_1
        if src < 0 or not ring.dims[src]:
            return Subspace.zero(dim_k)
        pw = power(i_minus_1)
        src_lo, src_hi = ring.slice_of(src)
        cols = []
        for c in range(src_lo, src_hi):
            col = [pw[r, c] for r in range(lo_k, hi_k)]
            cols.append(col)
        return Subspace.from_rows(dim_k, cols)

    kernels = {}
    images = {}
    steps = {}
    m = k - two_n - nil - 1
    while True:
        total = Subspace.zero(dim_k)
        for i in range(1, two_n + 2):
            e = two_n + m + i - k
            if e <= 0:
                continue
            if i - 1 not in images:
                images[i - 1] = image_in_degree(i - 1)
            img = images[i - 1]
            if img.is_zero():
                continue
            if e not in kernels:
                kernels[e] = kernel_in_degree(e)
            ker = kernels[e]
            if ker.is_zero():
                continue
            total = total.sum(ker.intersect(img))
        steps[m] = total
        if total.dim == dim_k:
            break
        m += 1
        if m > k + two_n + nil + 2:
            raise RuntimeError("perverse filtration failed to exhaust")
    return Filtration(dim_k, steps, degree=k)


def _nilpotency_index(mat: Matrix) -> int:
    n = mat.nrows
    power = mat
    d = 1
    while d <= n:
        if power.is_zero():
            return d
        power = power * mat
        d += 1
    raise ValueError("operator is not nilpotent")


def nilpotent_index(mat: Matrix) -> int:
    """Smallest d with mat^d = 0; raises on non-nilpotent input."""
    return _nilpotency_index(mat)


def perverse_hodge_check(ring: BigradedAlgebra) -> CheckResult:
    """The sigma-bar filtration equals the flag of holomorphic-degree
    cutoffs: P_m in degree k is the span of the (p, k-p) pieces with
    p <= m + shift, at one uniform shift (reported)."""
    res = CheckResult("perverse filtration detects the Hodge filtration")
    n = ring.symplectic_n()
    lo2, _ = ring.slice_of(2)
    sigma_bar = tuple(ring.sigma_bar()[lo2 + t] for t in range(ring.dims[2]))
    filts = {}
    for k in range(0, ring.top + 1, 2):
        if ring.dims[k]:
            filts[k] = perverse_filtration(ring, sigma_bar, k)

    def hodge_flag(k, cutoff):
        lo, _ = ring.slice_of(k)
        rows = []
        for t in range(ring.dims[k]):
            p, _q = ring.bidegrees[lo + t]
            if p <= cutoff:
                row = [Gauss(0)] * ring.dims[k]
                row[t] = Gauss(1)
                rows.append(row)
        return Subspace.from_rows(ring.dims[k], rows)

    found = None
    for shift in range(-2 * n - 2, 2 * n + 3):
        if all(all(filt.at(m) == hodge_flag(k, m + shift)
                   for m in range(filt.lo, filt.hi + 1))
               for k, filt in filts.items()):
            found = shift
            break
    if found is None:
        res.fail("no uniform index shift matches the Hodge flags")
    else:
        res.data["shift"] = found
        res.data["dims"] = {k: filt.dims() for k, filt in filts.items()}
        hodge = {}
        for gi, (p, q) in enumerate(ring.bidegrees):
            hodge[(p, q)] = hodge.get((p, q), 0) + 1
        grp = {}
        for k, filt in filts.items():
            prev = 0
            for m, d in sorted(filt.dims().items()):
                if d != prev:
                    grp[(m + found, k - m - found)] = d - prev
                    prev = d
        if grp != hodge:
            res.fail(f"perverse jumps {grp} do not match Hodge numbers {hodge}")
    return res


# -- weight filtration ------------------------------------------------------


def weight_filtration(nmat: Matrix, center: int = 0) -> Filtration:
    """Monodromy weight filtration of a nilpotent operator, centered.

    Built from an exact Jordan-chain decomposition (the sl2 route: a
    chain of length l contributes weights center + l - 1 - 2a), verified
    against both axioms and the kernel/image-sum formula before return.
    """
    n = nmat.nrows
    if nmat.ncols != n:
        raise ValueError("weight filtration needs a square matrix")
    nil = _nilpotency_index(nmat)
    powers = {0: Matrix.identity(n), 1: nmat}
    for j in range(2, nil + 1):
        powers[j] = powers[j - 1] * nmat
    kernels = [Subspace.zero(n)]
    for j in range(1, nil + 1):
        kernels.append(kernel(powers[j]))

    # chains: tops of length j span ker N^j modulo ker N^(j-1) + N ker N^(j+1)
    chain_vectors = {}      # weight (centered at 0) -> list of vectors
    span = Span(n)
    tops = []               # (length, vector)
    for j in range(nil, 0, -1):
        blocked = Span(n)
        for v in kernels[j - 1].basis:
            blocked.add(v)
        for length, top in tops:
            image = top
            for _ in range(length - j):
                image = nmat.matvec(image)
            blocked.add(image)
        fresh = []
        for v in kernels[j].basis:
            if not blocked.contains(v):
                # strip the part already accounted for, keep determinism
                blocked.add(v)
                fresh.append(v)
        for v in fresh:
            tops.append((j, v))
            vec = v
            for a in range(j):
                chain_vectors.setdefault(j - 1 - 2 * a, []).append(tuple(vec))
                vec = nmat.matvec(vec)

    weights = sorted(chain_vectors)
    steps = {}
    lo = (weights[0] if weights else 0) + center
    hi = (weights[-1] if weights else 0) + center
    acc = []
    steps[lo - 1] = Subspace.zero(n)
    for w in range(lo, hi + 1):
        acc.extend(chain_vectors.get(w - center, []))
        steps[w] = Subspace.from_rows(n, acc)
    filt = Filtration(n, steps)
    _verify_weight_axioms(filt, nmat, center, powers, nil)
    _verify_kernel_image_formula(filt, nmat, center, powers, nil, n)
    return filt


def _verify_weight_axioms(filt: Filtration, nmat, center, powers, nil):
    for m in range(filt.lo, filt.hi + 1):
        sub = filt.at(m)
        img = Subspace.from_rows(sub.ambient,
                                 [nmat.matvec(v) for v in sub.basis])
        if not (img <= filt.at(m - 2)):
            raise RuntimeError(f"weight filtration axiom N W_{m} <= W_{m-2} fails")
    for j in range(1, nil + 1):
        top = filt.at(center + j)
        below_top = filt.at(center + j - 1)
        bot = filt.at(center - j)
        below_bot = filt.at(center - j - 1)
        image_rows = [powers[j].matvec(v) for v in top.basis]
        mapped = below_bot.sum(Subspace.from_rows(top.ambient, image_rows))
        rank = mapped.dim - below_bot.dim
        if rank != top.dim - below_top.dim or rank != bot.dim - below_bot.dim:
            raise RuntimeError(
                f"weight filtration axiom N^{j}: gr_{center + j} ~ "
                f"gr_{center - j} fails")


def _verify_kernel_image_formula(filt, nmat, center, powers, nil, n):
    def power(j):
        return powers[j] if j <= nil else Matrix.zeros(n, n)

    for m in range(filt.lo - 1, filt.hi + 2):
        total = Subspace.zero(n)
        for j in range(0, nil + 1):
            e = (m - center) + j + 1
            if e <= 0:
                continue
            ker = kernel(power(e)) if e <= nil else Subspace.full(n)
            img_mat = power(j)
            img = Subspace.from_rows(n, img_mat.transpose().rows)
            total = total.sum(ker.intersect(img))
        if total != filt.at(m):
            raise RuntimeError(
                f"weight filtration disagrees with the kernel/image formula "
                f"at index {m}")


# -- nilpotent orbits and the monodromy operator ----------------------------


def nilpotent_orbit_check(nmat: Matrix, x, form) -> bool:
    """Positivity of q(Nx, conj(Nx)); exact, and exactly real."""
    v = nmat.matvec([xi if isinstance(xi, (Gauss, Fraction)) else Fraction(xi)
                     for xi in x])
    vbar = tuple(conj(c) for c in v)
    val = form.pair(v, vbar)
    if isinstance(val, Gauss) and val.im != 0:
        raise RuntimeError("q(Nx, conj Nx) is not real: conjugation misuse")
    return as_fraction(val) > 0


@dataclass(frozen=True)
class LagrangianTriple:
    """Classes (beta, eta, rho): isotropic fibration class, isotropic
    relative class, and a positive class orthogonal to both."""

    beta: tuple
    eta: tuple
    rho: tuple

    def validate(self, form):
        beta, eta, rho = (tuple(Fraction(c) for c in v)
                          for v in (self.beta, self.eta, self.rho))
        if not any(beta):
            raise ValueError("beta must be nonzero")
        if form.evaluate(beta) != 0:
            raise ValueError("beta must be isotropic")
        if form.evaluate(eta) != 0:
            raise ValueError("eta must be isotropic")
        if form.evaluate(rho) <= 0:
            raise ValueError("rho must be positive for the form")
        if form.pair(eta, rho) != 0 or form.pair(beta, rho) != 0:
            raise ValueError("rho must be orthogonal to beta and eta")
        return beta, eta, rho


def lagrangian_monodromy(ring: GradedAlgebra, triple: LagrangianTriple) -> Matrix:
    """The degree-preserving nilpotent commutator [L_beta, Lam_rho]."""
    form = ring.quadratic_form
    if form is None:
        raise ValueError("ring carries no degree-2 quadratic form")
    beta, _eta, rho = triple.validate(form)
    if not hl_test(ring, rho):
        raise ValueError("rho does not satisfy Hard Lefschetz")
    l_beta = cup_operator(ring, beta).matrix()
    tri_rho = complete_sl2(ring, rho)
    nmat = l_beta.commutator(tri_rho.Lam.matrix())
    _nilpotency_index(nmat)       # raises when not nilpotent
    return nmat


def degree_block(ring: GradedAlgebra, mat: Matrix, k: int) -> Matrix:
    lo, hi = ring.slice_of(k)
    return Matrix([[mat[r, c] for c in range(lo, hi)] for r in range(lo, hi)],
                  ncols=ring.dims[k])


def pw_compare(p_filt: Filtration, w_filt: Filtration, shift: int):
    """Exact flag equality P_m = W_(m+shift); returns (bool, report)."""
    if p_filt.ambient != w_filt.ambient:
        raise ValueError("filtrations live in different spaces")
    agree = all(p_filt.at(m) == w_filt.at(m + shift)
                for m in range(min(p_filt.lo, w_filt.lo - shift) - 1,
                               max(p_filt.hi, w_filt.hi - shift) + 2))
    report = {
        "shift": shift,
        "perverse_dims": p_filt.dims(),
        "weight_dims": w_filt.dims(),
    }
    return agree, report


def weak_pw_check(ring: GradedAlgebra, triple: LagrangianTriple,
                  window=None) -> CheckResult:
    """Per-degree equality of the perverse and weight filtrations.

    The weight filtration of N = [L_beta, Lam_rho] on the degree-k piece
    is centered at k - 2n; the comparison demands one uniform shift s
    with P_m = W_(2m+s) across every degree and records it.  The weight
    index runs at twice the perverse index, with jumps only on the
    matching parity.
    """
    res = CheckResult("perverse filtration equals monodromy weight filtration")
    form = ring.quadratic_form
    beta, _eta, _rho = triple.validate(form)
    two_n = ring.top // 2
    nmat = lagrangian_monodromy(ring, triple)
    deg2 = degree_block(ring, nmat, 2)
    idx = nilpotent_index(deg2)
    res.data["degree2_nilpotent_index"] = idx
    res.data["type_iii"] = (idx == 3)
    p_filts = {}
    w_filts = {}
    for k in range(0, ring.top + 1, 2):
        if not ring.dims[k]:
            continue
        p_filts[k] = perverse_filtration(ring, beta, k)
        w_filts[k] = weight_filtration(degree_block(ring, nmat, k),
                                       center=k - two_n)
    if window is None:
        window = range(-two_n - 2, two_n + 3)
    found = None
    for s in window:
        ok = True
        for k, pf in p_filts.items():
            wf = w_filts[k]
            if any((j - s) % 2 for j, _ in wf.jumps()):
                ok = False
                break
            if not all(pf.at(m) == wf.at(2 * m + s)
                       for m in range(pf.lo - 1, pf.hi + 2)):
                ok = False
                break
        if ok:
            found = s
            break
    if found is None:
        res.fail("no uniform shift aligns the perverse and weight flags")
    else:
        res.data["shift"] = found
    res.data["perverse_dims"] = {k: f.dims() for k, f in p_filts.items()}
    res.data["weight_dims"] = {k: f.dims() for k, f in w_filts.items()}
    return res


def default_lagrangian_triple(ring: GradedAlgebra) -> LagrangianTriple:
    """Deterministic (beta, eta, rho) from the enumeration streams."""
    form = ring.quadratic_form
    beta = next(iter(isotropic_stream(form)))
    rho = None
    for v in itertools.islice(vector_stream(form.dim), 200000):
        vv = tuple(Fraction(c) for c in v)
        if form.evaluate(vv) > 0 and form.pair(vv, beta) == 0:
            rho = vv
            break
    if rho is None:
        raise ValueError("no positive class orthogonal to beta found")
    eta = None
    for w in itertools.islice(isotropic_stream(form), 200000):
        ww = tuple(Fraction(c) for c in w)
        if form.pair(ww, rho) == 0 and ww != tuple(map(Fraction, beta)):
            eta = ww
            break
    if eta is None:
        raise ValueError("no second isotropic class orthogonal to rho found")
    return LagrangianTriple(tuple(Fraction(c) for c in beta), eta, rho)


def isotropic_independence_check(ring: GradedAlgebra, count=10) -> CheckResult:
    """dim P_m is the same for every isotropic class, all m and k."""
    res = CheckResult("perverse dimensions independent of the isotropic class")
    form = ring.quadratic_form
    classes = list(itertools.islice(isotropic_stream(form), count))
    reference = None
    for mu in classes:
        mu_f = tuple(Fraction(c) for c in mu)
        dims = {}
        for k in range(0, ring.top + 1, 2):
            if ring.dims[k]:
                filt = perverse_filtration(ring, mu_f, k)
                dims[k] = sorted(filt.jumps())
        if reference is None:
            reference = dims
        elif dims != reference:
            res.fail(f"class {mu} gives perverse dims {dims} != {reference}")
    res.data["classes_checked"] = len(classes)
    res.data["dims"] = {k: dict(v) for k, v in (reference or {}).items()}
    return res
