"""The degree-2 quadratic form of a symplectic model ring, the top-power
intersection relation q(a)^n = c * integral(a^(2n)), and signatures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, symmetric_signature
from .models import vector_stream
from .rings import BigradedAlgebra, QuadraticForm
from .scalars import as_fraction


class DegenerateSymplecticPower(ValueError):
    """(sigma * sigma-bar)^n integrates to zero; normalization impossible."""


class FujikiError(ValueError):
    """No single constant relates q(a)^n and the top intersection numbers."""


@dataclass(frozen=True)
class FujikiData:
    form: QuadraticForm
    constant: Fraction        # q(a)^n = constant * integral(a^(2n))
    n: int
    classes_checked: int


def bbf_form(ring: BigradedAlgebra) -> QuadraticForm:
    """Quadratic form (n/2) I((ss')^(n-1) a^2) + (1-n) I(s^(n-1) s'^n a) I(s^n s'^(n-1) a)
    with s = sigma, s' = sigma-bar and I the integration rescaled so that
    I((s s')^n) = 1.

    On rings carrying a rational companion the Gram matrix is returned on
    the rational degree-2 basis, where all values are rational.
    """
    n = ring.symplectic_n()
    sig, sigb = ring.sigma(), ring.sigma_bar()
    ssb = ring.multiply(sig, sigb)
    ssb_n = ring.power(ssb, n)
    norm = ring.integrate(ssb_n)
    if not norm:
        raise DegenerateSymplecticPower(
            "degenerate symplectic top power: integral((sigma sigma-bar)^n) = 0")

    def integ(x):
        return ring.integrate(x) / norm

    if ring.rational_model is not None:
        m = ring.rational_model.dims[2]
        basis = [ring.from_rational(ring.rational_model.embed(
            2, [Fraction(1 if t == a else 0) for t in range(m)]))
            for a in range(m)]
    else:
        m = ring.dims[2]
        lo, _ = ring.slice_of(2)
        basis = [ring.basis_vector(lo + a) for a in range(m)]

    ssb_nm1 = ring.power(ssb, n - 1)
    s_nm1_sb_n = ring.multiply(ring.power(sig, n - 1), ring.power(sigb, n))
    s_n_sb_nm1 = ring.multiply(ring.power(sig, n), ring.power(sigb, n - 1))
    half = Fraction(1, 2)
    lin_a = [integ(ring.multiply(s_nm1_sb_n, v)) for v in basis]
    lin_b = [integ(ring.multiply(s_n_sb_nm1, v)) for v in basis]
    grid = []
    for a in range(m):
        row = []
        for b in range(m):
            first = Fraction(n, 2) * integ(
                ring.multiply(ssb_nm1, ring.multiply(basis[a], basis[b])))
            second = (1 - n) * half * (lin_a[a] * lin_b[b] + lin_a[b] * lin_b[a])
            row.append(as_fraction(first + second))
        grid.append(row)
    return QuadraticForm(Matrix(grid, ncols=m))


def fujiki_check(ring, form: QuadraticForm, extra_classes=100) -> FujikiData:
    """Fit the unique constant c with form(a)^n = c * integral(a^(2n)).

    The constant is fitted on the first enumerated class with a nonzero
    top power and then verified exactly on a spanning set plus
    ``extra_classes`` further enumerated classes; any violation raises.
    """
    if ring.top % 4:
        raise FujikiError(f"ring top degree {ring.top} is not 4n")
    n = ring.top // 4
    m = ring.dims[2]
    if form.dim != m:
        raise FujikiError("form does not live on the degree-2 piece")

    def top_power(coords):
        x = ring.embed(2, coords)
        return as_fraction(ring.integrate(ring.power(x, 2 * n)))

    constant = None
    witness = None
    checked = 0
    pending = []
    for v in itertools.islice(vector_stream(m), m + extra_classes):
        coords = tuple(Fraction(c) for c in v)
        qv = as_fraction(form.evaluate(coords))
        tv = top_power(coords)
        if constant is None:
            if tv == 0:
                pending.append((coords, qv, tv))
                continue
            constant = qv ** n / tv
            witness = coords
            for coords2, q2, t2 in pending:
                if q2 ** n != constant * t2:
                    raise FujikiError(
                        f"Fujiki relation fails on class {tuple(map(str, coords2))}: "
                        f"q^{n} = {q2 ** n} but c*integral = {constant * t2}")
            checked += len(pending)
            pending = []
        else:
            if qv ** n != constant * tv:
                raise FujikiError(
                    f"Fujiki relation fails on class {tuple(map(str, coords))}: "
                    f"q^{n} = {qv ** n} but c*integral = {constant * tv}")
        checked += 1
    if constant is None:
        raise FujikiError("Fujiki relation fails: every enumerated class has "
                          "vanishing top power")
    return FujikiData(form=form, constant=constant, n=n, classes_checked=checked)


def form_signature(form: QuadraticForm):
    """Signature (pos, neg) of a nondegenerate rational form."""
    pos, neg, null = symmetric_signature(form.gram)
    if null:
        raise ValueError(f"degenerate form: radical has dimension {null}")
    return (pos, neg)
