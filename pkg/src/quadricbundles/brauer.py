"""Two-torsion Brauer classes over Q and Q(sqrt(d)) at desk scale.

Hilbert symbols are computed by the standard local formulas and
cross-validated against an exhaustive primitive-solution search modulo p^3
(odd p) and 2^6, which decides p-adic solubility of ``z^2 = a x^2 + b y^2``
for squarefree a, b by Hensel lifting.  On top of the symbols: quaternion
splitting and ramification, restriction to a quadratic extension,
corestriction via the projection formula, the classification invariants of
rational quadratic forms, isotropy by the local-global principle, similarity
of forms, and Albert forms of quaternion pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime


@dataclass(frozen=True)
class Place:
    """A place of Q: the real place (``p is None``) or a finite prime."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isprime(self.p):
                raise ValueError("%r is not prime" % (self.p,))
            object.__setattr__(self, "p", int(self.p))

    @classmethod
    def real(cls):
        return cls(None)

    @classmethod
    def prime(cls, p):
        return cls(p)

    @property
    def is_real(self):
        return self.p is None

    def sort_key(self):
        return (0, 0) if self.is_real else (1, self.p)

    def __str__(self):
        return "real" if self.is_real else str(self.p)


REAL = Place.real()


def _as_nonzero_fraction(x, label="value"):
    x = Fraction(x)
    if x == 0:
        raise ValueError("%s must be nonzero" % label)
    return x


@lru_cache(maxsize=None)
def _squarefree_int(n):
    sign = -1 if n < 0 else 1
    result = sign
    for prime, exponent in factorint(abs(n)).items():
        if exponent % 2:
            result *= prime
    return result


def squarefree_part(x):
    """Signed squarefree integer representing the square class of ``x``."""
    x = _as_nonzero_fraction(x)
    return _squarefree_int(x.numerator * x.denominator)


def prime_support(x):
    """Odd primes in the squarefree part of ``x``."""
    return tuple(p for p in sorted(factorint(abs(squarefree_part(x)))) if p != 2)


def relevant_places(values):
    """Real, 2, and every odd prime dividing a square class of ``values``.

    Hilbert symbols of the values are +1 everywhere else.
    """
    primes = set()
    for value in values:
        primes.update(prime_support(value))
    return [REAL, Place.prime(2)] + [Place.prime(p) for p in sorted(primes)]


def _legendre(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def _epsilon(u):
    return ((u - 1) // 2) % 2


def _omega(u):
    return ((u * u - 1) // 8) % 2


def _split_valuation(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


@lru_cache(maxsize=None)
def _hilbert_symbol_cached(a, b, place):
    if place.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = place.p
    alpha, u = _split_valuation(a, p)
    beta, w = _split_valuation(b, p)
    if p == 2:
        e = _epsilon(u) * _epsilon(w) + alpha * _omega(w) + beta * _omega(u)
        return -1 if e % 2 else 1
    result = 1
    if alpha % 2 and beta % 2 and (p - 1) // 2 % 2:
        result = -result
    if beta % 2:
        result *= _legendre(u, p)
    if alpha % 2:
        result *= _legendre(w, p)
    return result


def hilbert_symbol(a, b, place):
    """Local Hilbert symbol ``(a, b)`` at a place of Q, by formula."""
    return _hilbert_symbol_cached(squarefree_part(a), squarefree_part(b), place)


@lru_cache(maxsize=None)
def _solubility_search(a_mod, b_mod, p, modulus):
    xs = np.arange(modulus, dtype=np.int64)
    squares = np.zeros(modulus, dtype=bool)
    squares[(xs * xs) % modulus] = True
    ax2 = (a_mod * xs * xs) % modulus
    by2 = (b_mod * xs * xs) % modulus
    unit = (xs % p) != 0
    pairs = (
        (np.unique(ax2[unit]), np.unique(by2)),
        (np.unique(ax2), np.unique(by2[unit])),
    )
    for left, right in pairs:
        for start in range(0, len(left), 256):
            chunk = left[start:start + 256]
            if squares[(chunk[:, None] + right[None, :]) % modulus].any():
                return 1
    return -1


def hilbert_symbol_search(a, b, place):
    """Brute-force oracle for the Hilbert symbol.

    Finite places: exhaustive search for a primitive solution of
    ``z^2 = a x^2 + b y^2`` modulo ``p^3`` (odd ``p``) or ``2^6``; with
    squarefree coefficients any such solution lifts p-adically and any p-adic
    solution reduces to one.  A primitive solution must have x or y a unit.
    The real place is settled by signs alone.
    """
    sa, sb = squarefree_part(a), squarefree_part(b)
    if place.is_real:
        return 1 if sa > 0 or sb > 0 else -1
    p = place.p
    modulus = 64 if p == 2 else p ** 3
    return _solubility_search(sa % modulus, sb % modulus, p, modulus)


def is_local_square(x, place):
    """Is ``x`` a square in the completion of Q at ``place``?"""
    sf = squarefree_part(x)
    if place.is_real:
        return sf > 0
    if sf == 1:
        return True
    p = place.p
    if sf % p == 0:
        return False
    if p == 2:
        return sf % 8 == 1
    return _legendre(sf, p) == 1


# -- quaternion classes ------------------------------------------------------

def _validate_quadratic_d(d):
    as_fraction = Fraction(d)
    if as_fraction.denominator != 1 or as_fraction == 0:
        raise ValueError("d must be a squarefree nonsquare integer, got %r" % (d,))
    d = int(as_fraction)
    if d == 1 or _squarefree_int(d) != d:
        raise ValueError("d must be a squarefree nonsquare integer, got %r" % (d,))
    return d


@dataclass(frozen=True)
class QuaternionClass:
    """Brauer class of the quaternion algebra ``(a, b)``.

    ``d`` is ``None`` over Q, or a squarefree nonsquare integer marking the
    base field Q(sqrt(d)).
    """

    a: Fraction
    b: Fraction
    d: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", _as_nonzero_fraction(self.a, "a"))
        object.__setattr__(self, "b", _as_nonzero_fraction(self.b, "b"))
        if self.d is not None:
            object.__setattr__(self, "d", _validate_quadratic_d(self.d))


def quaternion_is_split(q):
    """Splitting over Q, with the (even-sized) list of ramified places."""
    if q.d is not None:
        raise ValueError("splitting test implemented over Q only")
    ramified = [
        v for v in relevant_places([q.a, q.b]) if hilbert_symbol(q.a, q.b, v) == -1
    ]
    return (not ramified, ramified)


def splits_over_quadratic(q, d):
    """Does ``q`` (over Q) split after restriction to Q(sqrt(d))?

    Standard criterion: the restriction is trivial iff at every ramified
    place of ``q`` the completion does not contain sqrt(d).
    """
    d = _validate_quadratic_d(d)
    split, ramified = quaternion_is_split(q)
    if split:
        return True
    return all(not is_local_square(d, v) for v in ramified)


def corestriction_projection(a, b_pair, d):
    """Corestrict ``(a, x + y*sqrt(d))`` from Q(sqrt(d)) to Q.

    Projection formula for a in Q: the result is ``(a, Norm(x + y*sqrt(d)))``
    with ``Norm = x^2 - d*y^2``.
    """
    a = _as_nonzero_fraction(a, "a")
    d = _validate_quadratic_d(d)
    x, y = (Fraction(component) for component in b_pair)
    norm = x * x - d * y * y
    if norm == 0:
        raise ValueError("b must be nonzero in Q(sqrt(%d))" % d)
    return QuaternionClass(a, norm)


def res_cor_doubling_check(beta, d):
    """Restriction to Q(sqrt(d)) followed by corestriction kills 2-torsion.

    ``beta = (a, b)`` over Q restricts to the same symbol over the extension;
    the projection formula corestricts it to ``(a, b^2)``, which must split.
    """
    if beta.d is not None:
        raise ValueError("beta must be a class over Q")
    cor = corestriction_projection(beta.a, (beta.b, 0), d)
    split, _ = quaternion_is_split(cor)
    return split


# -- rational quadratic forms ------------------------------------------------

@dataclass(frozen=True)
class RationalQuadraticForm:
    """Nondegenerate diagonal quadratic form over Q."""

    diag: tuple

    def __post_init__(self):
        entries = tuple(_as_nonzero_fraction(x, "diagonal entry") for x in self.diag)
        if not entries:
            raise ValueError("a form needs at least one diagonal entry")
        object.__setattr__(self, "diag", entries)

    @property
    def dim(self):
        return len(self.diag)

    def scaled(self, c):
        c = _as_nonzero_fraction(c, "scaling factor")
        return RationalQuadraticForm(tuple(c * x for x in self.diag))

    def __str__(self):
        return "<%s>" % ", ".join(str(x) for x in self.diag)


@dataclass(frozen=True)
class FormInvariants:
    """Classifying invariants: dimension, discriminant square class,
    real signature, and Hasse invariants at the relevant places."""

    dim: int
    disc: int
    signature: tuple
    hasse: tuple  # ((Place, +-1), ...) at relevant places, in place order


def hasse_invariant(form, place):
    """Product of ``(d_i, d_j)`` over ``i < j`` at the given place."""
    result = 1
    diag = form.diag
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            result *= hilbert_symbol(diag[i], diag[j], place)
    return result


def form_invariants(form):
    product = Fraction(1)
    pos = neg = 0
    for x in form.diag:
        product *= x
        if x > 0:
            pos += 1
        else:
            neg += 1
    places = relevant_places(form.diag)
    hasse = tuple((v, hasse_invariant(form, v)) for v in places)
    return FormInvariants(
        dim=form.dim,
        disc=squarefree_part(product),
        signature=(pos, neg),
        hasse=hasse,
    )


def forms_equivalent(f, g):
    """Isometry over Q, decided by the classification invariants."""
    inv_f, inv_g = form_invariants(f), form_invariants(g)
    if (inv_f.dim, inv_f.disc, inv_f.signature) != (inv_g.dim, inv_g.disc, inv_g.signature):
        return False
    places = {v for v, _ in inv_f.hasse} | {v for v, _ in inv_g.hasse}
    return all(
        hasse_invariant(f, v) == hasse_invariant(g, v)
        for v in sorted(places, key=Place.sort_key)
    )


def _locally_isotropic(form, place):
    inv = form_invariants(form)
    n = form.dim
    if place.is_real:
        pos, neg = inv.signature
        return pos > 0 and neg > 0
    if n >= 5:
        return True
    epsilon = hasse_invariant(form, place)
    d = inv.disc
    if n == 3:
        return hilbert_symbol(-1, -d, place) == epsilon
    if n == 4:
        if not is_local_square(d, place):
            return True
        return epsilon == hilbert_symbol(-1, -1, place)
    if n == 2:
        return is_local_square(-d, place)
    return False


def is_isotropic(form):
    """Does the form represent zero nontrivially over Q?

    Local-global principle: dimensions 2..4 are checked at the real place and
    the primes dividing the entries (elsewhere the local conditions hold
    automatically); dimension >= 5 is isotropic at every finite place, so
    only indefiniteness at the real place matters.
    """
    n = form.dim
    if n == 1:
        return False
    inv = form_invariants(form)
    pos, neg = inv.signature
    if n >= 5:
        return pos > 0 and neg > 0
    if n == 2:
        return inv.disc == -1
    return all(_locally_isotropic(form, v) for v in relevant_places(form.diag))


def is_isotropic_over_quadratic(form, d):
    """Isotropy of a rational form of dimension >= 5 over Q(sqrt(d)).

    Completions at finite places of a number field make any form of
    dimension >= 5 isotropic, so only the real embeddings decide: none exist
    for d < 0, and for d > 0 both restrict the rational entries with their
    original signs.
    """
    if form.dim < 5:
        raise ValueError("quadratic-extension isotropy implemented for dim >= 5 only")
    d = _validate_quadratic_d(d)
    if d < 0:
        return True
    pos, neg = form_invariants(form).signature
    return pos > 0 and neg > 0


def similarity_candidates(f, g):
    """Square classes supported on -1, 2, and the primes of the entries.

    Any valid similarity scaling can be moved into this set because the Hasse
    invariants of both forms are trivial at every other place.
    """
    primes = {2}
    for x in f.diag + g.diag:
        primes.update(prime_support(x))
    primes = sorted(primes)
    for sign in (1, -1):
        for mask in range(1 << len(primes)):
            c = sign
            for i, p in enumerate(primes):
                if mask >> i & 1:
                    c *= p
            yield c


def forms_similar(f, g):
    """Is there ``c`` with ``c*f`` isometric to ``g``?  Returns (bool, c)."""
    if f.dim != g.dim:
        raise ValueError("forms of different dimension cannot be similar")
    for c in similarity_candidates(f, g):
        if forms_equivalent(f.scaled(c), g):
            return True, c
    return False, None


def albert_form(q1, q2):
    """Six-dimensional form attached to a pair of quaternion classes over Q:
    ``<a1, b1, -a1*b1, -a2, -b2, a2*b2>`` with square-class-reduced entries."""
    if q1.d is not None or q2.d is not None:
        raise ValueError("Albert forms are built from classes over Q")
    entries = (
        q1.a,
        q1.b,
        -q1.a * q1.b,
        -q2.a,
        -q2.b,
        q2.a * q2.b,
    )
    return RationalQuadraticForm(tuple(Fraction(squarefree_part(x)) for x in entries))


@dataclass(frozen=True)
class DescentReport:
    """Outcome of one quaternion-descent instance (p, q, r, d)."""

    p: Fraction
    q: Fraction
    r: Fraction
    d: int
    isotropy_form: RationalQuadraticForm   # <1, -d, -p, q, r, -d*p*q*r>
    albert_pair_form: RationalQuadraticForm
    similar: bool
    scale: int | None
    splits_over_extension: bool
    residual_class: QuaternionClass        # (d*p*q, d*p*r), the descended candidate
    albert_anisotropic_over_base: bool
    albert_isotropic_over_extension: bool
    hypothesis_division_split: bool
    consistent: bool


def verify_quaternion_descent_instance(p, q, r, d):
    """Check one instance of the quaternion descent argument.

    (i) the six-dimensional form ``<1, -d, -p, q, r, -d*p*q*r>`` is compared
    for similarity with the Albert form of the pair ``(p, d), (d*p*q, d*p*r)``;
    (ii) ``(p, d)`` must split over Q(sqrt(d)); (iii) the residual class
    ``(d*p*q, d*p*r)`` is reported.  A non-similar outcome only contradicts
    the descent argument when the pair's class is a biquaternion division
    algebra split by the extension, so that hypothesis is evaluated too.
    """
    p, q, r = (Fraction(x) for x in (p, q, r))
    d = _validate_quadratic_d(d)
    for label, x in (("p", p), ("q", q), ("r", r)):
        _as_nonzero_fraction(x, label)
    isotropy_form = RationalQuadraticForm(
        tuple(
            Fraction(squarefree_part(x))
            for x in (Fraction(1), Fraction(-d), -p, q, r, -d * p * q * r)
        )
    )
    first = QuaternionClass(p, Fraction(d))
    second = QuaternionClass(d * p * q, d * p * r)
    pair_form = albert_form(first, second)
    similar, scale = forms_similar(isotropy_form, pair_form)
    splits = splits_over_quadratic(first, d)
    anisotropic = not is_isotropic(pair_form)
    isotropic_ext = is_isotropic_over_quadratic(pair_form, d)
    hypothesis = anisotropic and isotropic_ext
    return DescentReport(
        p=p,
        q=q,
        r=r,
        d=d,
        isotropy_form=isotropy_form,
        albert_pair_form=pair_form,
        similar=similar,
        scale=scale,
        splits_over_extension=splits,
        residual_class=second,
        albert_anisotropic_over_base=anisotropic,
        albert_isotropic_over_extension=isotropic_ext,
        hypothesis_division_split=hypothesis,
        consistent=similar or not hypothesis,
    )
