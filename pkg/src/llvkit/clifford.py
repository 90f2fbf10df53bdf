"""Clifford algebra of a rational quadratic space, with the parity and
reversal involutions, the normalized trace, induced complex structures
from positive orthogonal pairs, and the trace polarization form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, congruence_diagonalize, inverse, symmetric_signature
from .reporting import CheckResult
from .rings import QuadraticForm
from .scalars import rat_sqrt

MAX_CLIFFORD_DIM = 10


class CliffordAlgebra:
    """C(H, Q) on a diagonalizing basis; basis elements are the products
    e_S over bitmask subsets S of the orthogonal generators, with
    e_i e_i = d_i and e_i e_j = -e_j e_i.
    """

    def __init__(self, form: QuadraticForm):
        if not form.is_nondegenerate():
            raise ValueError("Clifford algebra needs a nondegenerate form")
        m = form.dim
        if m > MAX_CLIFFORD_DIM:
            raise ValueError(
                f"refusing Clifford algebra on {m} generators: dimension 2^{m} "
                f"exceeds the 2^{MAX_CLIFFORD_DIM} bound")
        self.form = form
        self.m = m
        self.dim = 1 << m
        p, diag = congruence_diagonalize(form.gram)
        self.change = p                  # rows: orthogonal basis, original coords
        self.change_inv = inverse(p)
        self.diag = [Fraction(d) for d in diag]

    # -- elements -----------------------------------------------------

    def zero(self):
        return CliffordElement(self, (Fraction(0),) * self.dim)

    def one(self):
        coeffs = [Fraction(0)] * self.dim
        coeffs[0] = Fraction(1)
        return CliffordElement(self, coeffs)

    def generator(self, i):
        coeffs = [Fraction(0)] * self.dim
        coeffs[1 << i] = Fraction(1)
        return CliffordElement(self, coeffs)

    def vector(self, v):
        """Degree-1 element of a vector given in the original coordinates."""
        if len(v) != self.m:
            raise ValueError(f"vector needs {self.m} coordinates")
        coords = self.change_inv.transpose().matvec(
            [Fraction(c) for c in v])
        coeffs = [Fraction(0)] * self.dim
        for i, c in enumerate(coords):
            coeffs[1 << i] = c
        return CliffordElement(self, coeffs)

    def basis_label(self, mask):
        if not mask:
            return "1"
        return "".join(f"g{i + 1}" for i in range(self.m) if mask >> i & 1)

    def mul_masks(self, s, t):
        """(coefficient, mask) of e_S * e_T."""
        sign = 1
        # count transpositions: generators of t passing generators of s above them
        for i in range(self.m):
            if t >> i & 1:
                higher = s >> (i + 1)
                sign *= -1 if bin(higher).count("1") % 2 else 1
        coeff = Fraction(sign)
        for i in range(self.m):
            if s >> i & 1 and t >> i & 1:
                coeff *= self.diag[i]
        return coeff, s ^ t

    def __repr__(self):
        return f"CliffordAlgebra(m={self.m}, dim={self.dim})"


@dataclass(frozen=True)
class CliffordElement:
    algebra: CliffordAlgebra
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           tuple(Fraction(c) for c in self.coeffs))
        if len(self.coeffs) != self.algebra.dim:
            raise ValueError("coefficient vector length mismatch")

    def __add__(self, other):
        self._check(other)
        return CliffordElement(self.algebra,
                               tuple(a + b for a, b in
                                     zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CliffordElement(self.algebra,
                               tuple(a - b for a, b in
                                     zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CliffordElement(self.algebra, tuple(-a for a in self.coeffs))

    def scale(self, c):
        c = Fraction(c)
        return CliffordElement(self.algebra, tuple(c * a for a in self.coeffs))

    def _check(self, other):
        if not isinstance(other, CliffordElement):
            raise TypeError("expected a CliffordElement")
        if other.algebra is not self.algebra:
            raise ValueError("elements live in different Clifford algebras")

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        parts = [f"{c}*{self.algebra.basis_label(s)}"
                 for s, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) if parts else "0"


def clifford(form: QuadraticForm) -> CliffordAlgebra:
    """Clifford algebra presented by v*v = Q(v, v) on every vector."""
    return CliffordAlgebra(form)


def cl_multiply(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    x._check(y)
    alg = x.algebra
    acc = [Fraction(0)] * alg.dim
    for s, cs in enumerate(x.coeffs):
        if not cs:
            continue
        for t, ct in enumerate(y.coeffs):
            if not ct:
                continue
            coeff, mask = alg.mul_masks(s, t)
            acc[mask] += cs * ct * coeff
    return CliffordElement(alg, acc)


def conjugate(y: CliffordElement) -> CliffordElement:
    """Parity composed with reversal: e_S picks up (-1)^(k(k+1)/2), k=|S|."""
    alg = y.algebra
    out = []
    for s, c in enumerate(y.coeffs):
        k = bin(s).count("1")
        sign = -1 if (k * (k + 1) // 2) % 2 else 1
        out.append(sign * c)
    return CliffordElement(alg, out)


def cl_trace(x: CliffordElement) -> Fraction:
    """Trace of left multiplication in the regular representation,
    normalized by 2^m so that Tr(1) = 1; equals the e_0 coefficient."""
    return x.coeffs[0]


def cl_trace_regular(x: CliffordElement) -> Fraction:
    """The same trace computed honestly from the regular representation."""
    alg = x.algebra
    total = Fraction(0)
    for t in range(alg.dim):
        for s, cs in enumerate(x.coeffs):
            if cs:
                coeff, mask = alg.mul_masks(s, t)
                if mask == t:
                    total += cs * coeff
    return total / alg.dim


def complex_structure(alg: CliffordAlgebra, gamma, gamma_prime) -> CliffordElement:
    """mu = (gamma/|gamma|)(gamma'/|gamma'|) with mu^2 = -1.

    Requires an admissible orthogonal positive pair: both norms must be
    perfect squares of rationals so the rescaling stays in the field.
    """
    form = alg.form
    g = tuple(Fraction(c) for c in gamma)
    gp = tuple(Fraction(c) for c in gamma_prime)
    if form.pair(g, gp) != 0:
        raise ValueError("the pair is not orthogonal")
    qg, qgp = form.evaluate(g), form.evaluate(gp)
    if qg <= 0 or qgp <= 0:
        raise ValueError("both classes must be positive for the form")
    r, rp = rat_sqrt(qg), rat_sqrt(qgp)
    if r is None or rp is None:
        raise ValueError("requires an admissible pair: norms must be perfect "
                         "squares of rationals")
    mu = cl_multiply(alg.vector(tuple(c / r for c in g)),
                     alg.vector(tuple(c / rp for c in gp)))
    square = cl_multiply(mu, mu)
    if square.coeffs != (-alg.one()).coeffs:
        raise RuntimeError("mu^2 != -1: complex structure construction failed")
    return mu


def polarization_form(alg: CliffordAlgebra, a: CliffordElement):
    """Gram matrix of sigma_a(x, y) = Tr(x a conj(y)) on the subset basis.

    Reports the (anti)symmetry type and decides by full exact signature
    which of +-sigma_a is positive in the polarization sense, i.e. makes
    (x, y) -> sigma_a(x, a y) positive-definite.
    """
    a._check(alg.one())
    res = CheckResult("trace polarization form")
    basis = [CliffordElement(alg, tuple(Fraction(1 if t == s else 0)
                                        for t in range(alg.dim)))
             for s in range(alg.dim)]
    conj_basis = [conjugate(b) for b in basis]
    a_conj_basis = [cl_multiply(a, cb) for cb in conj_basis]
    gram = Matrix([[cl_trace(cl_multiply(x, acy)) for acy in a_conj_basis]
                   for x in basis], ncols=alg.dim)
    antisym = all(gram[i, j] == -gram[j, i]
                  for i in range(alg.dim) for j in range(alg.dim))
    res.data["antisymmetric"] = antisym
    if not antisym:
        res.fail("sigma_a is not antisymmetric")
    a_basis = [cl_multiply(a, b) for b in basis]
    conj_a_basis = [conjugate(ab) for ab in a_basis]
    sym = Matrix([[cl_trace(cl_multiply(cl_multiply(x, a), cay))
                   for cay in conj_a_basis] for x in basis], ncols=alg.dim)
    positive_sign = None
    if sym.is_symmetric():
        pos, neg, null = symmetric_signature(sym)
        if (pos, neg, null) == (alg.dim, 0, 0):
            positive_sign = 1
        elif (pos, neg, null) == (0, alg.dim, 0):
            positive_sign = -1
        res.data["probe_signature"] = (pos, neg, null)
    else:
        res.fail("the associated probe form is not symmetric")
    res.data["positive_sign"] = positive_sign
    if positive_sign is None:
        res.fail("neither sigma_a nor -sigma_a passes the positivity probe")
    return gram, res
