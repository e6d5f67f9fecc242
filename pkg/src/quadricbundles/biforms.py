"""Localized modules of (2,2)-biforms and the non-flatness witness.

A biform of bidegree (2,2) in (u:v) x (u':v') lives in the nine-dimensional
space with monomial basis

    u^2u'^2, u^2u'v', u^2v'^2, uvu'^2, uvu'v', uvv'^2, v^2u'^2, v^2u'v', v^2v'^2.

Three modules over partial Laurent localizations of k[r, s, t] are generated
by Laurent monomials times constant biforms; their intersection is certified
to be the free module spanned by nine such generators over k[r, s, t], and a
curve through the resulting projective embedding witnesses that the fiber of
the closure over the origin is too large.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .linalg import (
    determinant,
    intersect_row_spaces,
    invert_matrix,
    mat_vec,
    rational_rank,
    row_space,
)
from .rings import (
    LaurentPolynomial,
    QuotientElement,
    RingHomomorphism,
    VariableTable,
    parse,
    retabulate,
)

#: Universal Laurent carrier for all scalar coordinates; each module declares
#: which variables its own coefficient ring actually inverts.
RST = VariableTable(("r", "s", "t"), invertible=("r", "s", "t"))

#: The plain polynomial ring k[r, s, t], source of the curve substitution.
RST_PLAIN = VariableTable(("r", "s", "t"))

#: Homogeneous coordinates on the two projective lines.
BIFORM_TABLE = VariableTable(("u", "v", "u'", "v'"))

#: Exponent vectors of the standard monomial basis, in the fixed order.
BIFORM_BASIS = (
    (2, 0, 2, 0),
    (2, 0, 1, 1),
    (2, 0, 0, 2),
    (1, 1, 2, 0),
    (1, 1, 1, 1),
    (1, 1, 0, 2),
    (0, 2, 2, 0),
    (0, 2, 1, 1),
    (0, 2, 0, 2),
)

_BASIS_INDEX = {exps: i for i, exps in enumerate(BIFORM_BASIS)}


def biform_coordinates(poly):
    """Coordinates of a constant-coefficient (2,2)-biform in the standard basis."""
    coords = [Fraction(0)] * 9
    for exps, coeff in poly.terms.items():
        index = _BASIS_INDEX.get(exps)
        if index is None:
            raise ValueError("%s is not homogeneous of bidegree (2, 2)" % poly)
        coords[index] = coeff
    return tuple(coords)


def _form(text_or_factors):
    """Constant biform from a product of parsed factors."""
    if isinstance(text_or_factors, str):
        return biform_coordinates(parse(text_or_factors, BIFORM_TABLE))
    product = LaurentPolynomial.one(BIFORM_TABLE)
    for factor in text_or_factors:
        product = product * parse(factor, BIFORM_TABLE)
    return biform_coordinates(product)


@dataclass(frozen=True)
class BiformVector:
    """A biform with coefficients in the Laurent ring k[r^+-, s^+-, t^+-]."""

    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 9:
            raise ValueError("a biform vector has nine coordinates")
        for c in self.coords:
            if c.table != RST:
                raise ValueError("coordinates must live over the r, s, t ring")

    @classmethod
    def monomial_times_constant(cls, monomial, constant):
        return cls(tuple(monomial * c for c in constant))

    def __add__(self, other):
        return BiformVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return BiformVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)


@dataclass(eq=False)
class MonomialScaledModule:
    """Module generated by Laurent monomials times constant biforms.

    ``ring`` declares which of r, s, t the coefficient ring inverts; the nine
    constant forms are a basis of the biform space, so membership reduces to
    one change of basis plus a Laurent support check.
    """

    name: str
    ring: VariableTable
    gens: tuple  # ((monomial, constant 9-vector), ...)

    def __post_init__(self):
        if len(self.gens) != 9:
            raise ValueError("expected nine generators")
        if rational_rank([list(form) for _, form in self.gens]) != 9:
            raise ValueError("constant forms of %s are not a basis" % self.name)

    @cached_property
    def basis_inverse(self):
        """Inverse of the column matrix of the constant forms, computed once."""
        columns = [[self.gens[j][1][i] for j in range(9)] for i in range(9)]
        return invert_matrix(columns)

    def coefficient_ring_allows(self, poly):
        """Does the Laurent polynomial lie in this module's coefficient ring?"""
        for exps in poly.terms:
            for e, invertible in zip(exps, self.ring.invertible):
                if e < 0 and not invertible:
                    return False
        return True

    def generator_vector(self, j):
        monomial, form = self.gens[j]
        constants = tuple(
            LaurentPolynomial.constant(RST, c) for c in form
        )
        return BiformVector(tuple(monomial * c for c in constants))


def _monomial(text):
    return parse(text, RST)


def _module(name, inverted, gens):
    ring = VariableTable(("r", "s", "t"), invertible=inverted)
    return MonomialScaledModule(
        name=name,
        ring=ring,
        gens=tuple((_monomial(mono), form) for mono, form in gens),
    )


def local_module(index):
    """The three local models: biform modules over k[r,s,t] with two of the
    variables inverted (1: r,s; 2: r,t; 3: s,t)."""
    if index == 1:
        gens = (
            ("t^2", _form("u^2*u'^2")),
            ("t", _form("u^2*u'*v'")),
            ("t^2", _form("u^2*v'^2")),
            ("t", _form("u*v*u'^2")),
            ("1", _form("u*v*u'*v'")),
            ("t", _form("u*v*v'^2")),
            ("t^2", _form("v^2*u'^2")),
            ("t", _form("v^2*u'*v'")),
            ("t^2", _form("v^2*v'^2")),
        )
        return _module("M1", ("r", "s"), gens)
    if index == 2:
        gens = (
            ("s^2", _form(("u^2+v^2", "u'^2+v'^2"))),
            ("s", _form(("u^2+v^2", "u'^2-v'^2"))),
            ("s^2", _form(("u^2+v^2", "u'*v'"))),
            ("s", _form(("u^2-v^2", "u'^2+v'^2"))),
            ("1", _form(("u^2-v^2", "u'^2-v'^2"))),
            ("s", _form(("u^2-v^2", "u'*v'"))),
            ("s^2", _form(("u*v", "u'^2+v'^2"))),
            ("s", _form(("u*v", "u'^2-v'^2"))),
            ("s^2", _form(("u*v", "u'*v'"))),
        )
        return _module("M2", ("r", "t"), gens)
    if index == 3:
        gens = (
            ("r^2", _form("u^2*u'^2")),
            ("r^2", _form(("u*v'+v*u'", "u*v'+v*u'"))),
            ("1", _form(("u*v'-v*u'", "u*v'-v*u'"))),
            ("r^2", _form("v^2*v'^2")),
            ("r", _form(("u*u'", "u*v'-v*u'"))),
            ("r", _form(("v*v'", "u*v'-v*u'"))),
            ("r", _form(("u*v'+v*u'", "u*v'-v*u'"))),
            ("r^2", _form(("u*u'", "u*v'+v*u'"))),
            ("r^2", _form(("v*v'", "u*v'+v*u'"))),
        )
        return _module("M3", ("s", "t"), gens)
    raise ValueError("local module index must be 1, 2 or 3")


def intersection_module():
    """The free module over k[r, s, t] that the three local modules cut out."""
    gens = (
        ("r^2*s^2", _form("u*v*u'*v'")),
        ("r^2*t^2", _form(("u^2-v^2", "u'^2-v'^2"))),
        ("s^2*t^2", _form(("u*v'-v*u'", "u*v'-v*u'"))),
        ("r*s*t", _form(("u*u'+v*v'", "u*v'-v*u'"))),
        ("r^2*s*t", _form(("u*u'-v*v'", "u*v'+v*u'"))),
        ("r*s^2*t", _form(("u*u'-v*v'", "u*v'-v*u'"))),
        ("r*s*t^2", _form(("u*v'+v*u'", "u*v'-v*u'"))),
        ("r^2*s^2*t", _form(("u*u'+v*v'", "u*v'+v*u'"))),
        ("r^2*s*t^2", _form(("u*u'-v*v'", "u*u'+v*v'"))),
    )
    return _module("N", (), gens)


@dataclass(frozen=True)
class MembershipCertificate:
    member: bool
    coefficients: tuple  # one Laurent polynomial per generator
    offending: tuple     # generator indices whose coefficient leaves the ring


def membership(vector, module):
    """Solve for the unique fraction-field coordinates and check supports.

    The constant forms are a basis, so ``x = sum_j c_j * mono_j * form_j`` has
    exactly one solution with ``c_j`` Laurent polynomials; membership holds
    iff every ``c_j`` lies in the module's coefficient ring.
    """
    inverse = module.basis_inverse
    # coordinates of x in the module's constant-form basis, still scaled by
    # the generator monomials
    scaled = [
        sum(
            (inverse[j][i] * vector.coords[i] for i in range(9)),
            LaurentPolynomial.zero(RST),
        )
        for j in range(9)
    ]
    coefficients = []
    offending = []
    for j, value in enumerate(scaled):
        monomial, _ = module.gens[j]
        coefficient = value * monomial.inverse()
        coefficients.append(coefficient)
        if not module.coefficient_ring_allows(coefficient):
            offending.append(j)
    return MembershipCertificate(
        member=not offending,
        coefficients=tuple(coefficients),
        offending=tuple(offending),
    )


def back_substitute(certificate, module):
    """Reassemble ``sum_j c_j * gen_j`` from a membership certificate."""
    total = BiformVector(tuple(LaurentPolynomial.zero(RST) for _ in range(9)))
    for coefficient, (monomial, form) in zip(certificate.coefficients, module.gens):
        scale = coefficient * monomial
        contribution = BiformVector(
            tuple(scale * LaurentPolynomial.constant(RST, c) for c in form)
        )
        total = total + contribution
    return total


@dataclass(frozen=True)
class ContainmentReport:
    passed: bool
    certificates: tuple  # (generator index, module name, MembershipCertificate)


def verify_containment():
    """Every generator of the intersection module lies in all three local
    modules, with every certificate re-checked by exact back-substitution."""
    target = intersection_module()
    modules = [local_module(i) for i in (1, 2, 3)]
    certificates = []
    passed = True
    for g in range(9):
        vector = target.generator_vector(g)
        for module in modules:
            certificate = membership(vector, module)
            if not certificate.member:
                passed = False
            elif back_substitute(certificate, module) != vector:
                raise AssertionError(
                    "certificate for generator %d in %s fails back-substitution"
                    % (g, module.name)
                )
            certificates.append((g, module.name, certificate))
    return ContainmentReport(passed=passed, certificates=tuple(certificates))


@dataclass(frozen=True)
class FreenessReport:
    passed: bool
    det: LaurentPolynomial


def freeness_certificate():
    """Nonzero 9x9 determinant of the generators in the standard basis.

    The generators are fraction-field independent, so the module they span
    over k[r, s, t] is free of rank nine with them as basis.
    """
    target = intersection_module()
    rows = [
        list(target.generator_vector(g).coords)
        for g in range(9)
    ]
    det = determinant(rows)
    return FreenessReport(passed=not det.is_zero(), det=det)


def graded_subspace(module, exponents):
    """Subspace of constant biforms w with ``m * w`` in the module, for the
    monomial ``m = r^a s^b t^c``.

    ``m * w = sum c_j mono_j form_j`` forces ``c_j = (m / mono_j) * <w in
    module basis>_j``, so coordinate j may be nonzero exactly when
    ``m / mono_j`` lies in the coefficient ring.
    """
    allowed_rows = []
    for monomial, form in module.gens:
        (mono_exps, _), = monomial.terms.items()
        quotient = tuple(e - me for e, me in zip(exponents, mono_exps))
        if all(
            e >= 0 or invertible
            for e, invertible in zip(quotient, module.ring.invertible)
        ):
            allowed_rows.append(list(form))
    return row_space(allowed_rows)


def intersection_subspace(exponents):
    spaces = [graded_subspace(local_module(i), exponents) for i in (1, 2, 3)]
    return intersect_row_spaces(spaces, 9)


@dataclass(frozen=True)
class GradedEqualityReport:
    passed: bool
    checked: int
    mismatches: tuple
    saturated: bool


def verify_graded_intersection(window=4):
    """Monomial-by-monomial equality of the intersection with the free module.

    Both sides split as direct sums over (r, s, t)-monomials of subspaces of
    the nine-dimensional biform space; equality over the window plus
    stabilization at its boundary certifies the module identity, since every
    generator exponent is at most 2 per variable.
    """
    if window < 4:
        raise ValueError("window must cover exponents 0..4, got %d" % window)
    target = intersection_module()
    mismatches = []
    checked = 0
    saturated = True
    span = range(window + 1)
    for a in span:
        for b in span:
            for c in span:
                exponents = (a, b, c)
                lhs = intersection_subspace(exponents)
                rhs = graded_subspace(target, exponents)
                checked += 1
                if lhs != rhs:
                    mismatches.append((exponents, lhs, rhs))
                for axis in range(3):
                    if exponents[axis] == window:
                        beyond = list(exponents)
                        beyond[axis] += 1
                        beyond = tuple(beyond)
                        if intersection_subspace(beyond) != lhs:
                            saturated = False
                        if graded_subspace(target, beyond) != rhs:
                            saturated = False
    return GradedEqualityReport(
        passed=not mismatches and saturated,
        checked=checked,
        mismatches=tuple(mismatches),
        saturated=saturated,
    )


# -- the non-flatness witness -------------------------------------------------

#: Function field of the curve: gamma is inverted because the curve data has
#: gamma in denominators.
CURVE_TABLE = VariableTable(("s", "t", "alpha", "beta", "gamma"), invertible=("gamma",))


@dataclass(frozen=True)
class CurveSpec:
    """Substitution data for the witness curve.

    ``r = s``, ``v = v' = 4t``, and ``t^2 = modulus`` in the function field
    k(alpha, beta, gamma)[s, t]; ``gamma_exponent`` records which power of
    gamma appears in the last modulus term.
    """

    gamma_exponent: int
    r: LaurentPolynomial
    u: LaurentPolynomial
    v: LaurentPolynomial
    u_prime: LaurentPolynomial
    v_prime: LaurentPolynomial
    modulus: LaurentPolynomial


def witness_curve(gamma_exponent, drop_modulus_term=None):
    """The witness curve with the chosen gamma exponent in the modulus.

    ``drop_modulus_term`` removes one of the four modulus terms (0..3); used
    only as a negative control.
    """
    if gamma_exponent not in (-1, -2):
        raise ValueError("gamma exponent must be -1 or -2")
    terms = [
        "-1/16*s^4*alpha^2",
        "-1/16*s^2*beta^2",
        "1/16*s^2*gamma^2",
        "1/16*s^4*alpha^2*beta^2*gamma^%d" % gamma_exponent,
    ]
    if drop_modulus_term is not None:
        del terms[drop_modulus_term]
    modulus = LaurentPolynomial.zero(CURVE_TABLE)
    for text in terms:
        modulus = modulus + parse(text, CURVE_TABLE)
    return CurveSpec(
        gamma_exponent=gamma_exponent,
        r=parse("s", CURVE_TABLE),
        u=parse("s^2*alpha*beta*gamma^-1 + s^2*alpha + s*beta + s*gamma", CURVE_TABLE),
        v=parse("4*t", CURVE_TABLE),
        u_prime=parse("s^2*alpha*beta*gamma^-1 - s^2*alpha + s*beta - s*gamma", CURVE_TABLE),
        v_prime=parse("4*t", CURVE_TABLE),
        modulus=modulus,
    )


def curve_coordinates(spec):
    """Images of the nine generators along the curve, reduced mod t^2 - f.

    Generator ``mono(r, s, t) * form(u, v, u', v')`` is evaluated with
    ``r = spec.r`` and the biform letters replaced by the curve data, then
    reduced to even/odd parts in the quotient by ``t^2 - modulus``.
    """
    target = intersection_module()
    scalars = RingHomomorphism(
        RST_PLAIN,
        CURVE_TABLE,
        {"r": spec.r, "s": parse("s", CURVE_TABLE), "t": parse("t", CURVE_TABLE)},
    )
    letters = RingHomomorphism(
        BIFORM_TABLE,
        CURVE_TABLE,
        {"u": spec.u, "v": spec.v, "u'": spec.u_prime, "v'": spec.v_prime},
    )
    images = []
    for monomial, form in target.gens:
        form_poly = LaurentPolynomial.zero(BIFORM_TABLE)
        for exps, coeff in zip(BIFORM_BASIS, form):
            if coeff:
                form_poly = form_poly + LaurentPolynomial(BIFORM_TABLE, {exps: coeff})
        value = scalars(retabulate(monomial, RST_PLAIN)) * letters(form_poly)
        images.append(QuotientElement.reduce(value, spec.modulus, "t"))
    return images


@dataclass(frozen=True)
class WitnessReport:
    gamma_exponent: int
    coordinate_order: tuple  # indices (x0, x3, x4, x5) used for the identities
    identities_hold: bool
    x0_nonzero: bool
    residuals: tuple  # even/odd parts of x3 - alpha*x0 etc., as text
    passed: bool


def _multiplier(name):
    return parse(name, CURVE_TABLE)


def nonflatness_witness(spec):
    """Check the projective identities forced along the witness curve.

    In printed generator order the coordinates must satisfy
    ``x3 = alpha*x0``, ``x4 = beta*x0``, ``x5 = gamma*x0`` identically with
    ``x0`` nonzero; if the printed order fails, coordinate assignments
    ``(x0, x3, x4, x5)`` consistent with the relations are searched.
    """
    images = curve_coordinates(spec)
    multipliers = tuple(_multiplier(name) for name in ("alpha", "beta", "gamma"))

    def attempt(i0, i3, i4, i5):
        base = images[i0]
        residuals = tuple(
            images[target] - scale * base
            for target, scale in zip((i3, i4, i5), multipliers)
        )
        holds = all(residual.is_zero() for residual in residuals)
        return holds, residuals

    printed = (0, 3, 4, 5)
    holds, residuals = attempt(*printed)
    order = printed
    if not holds:
        for i0 in range(9):
            if images[i0].is_zero():
                continue
            matches = []
            for scale in multipliers:
                found = [
                    j
                    for j in range(9)
                    if j != i0 and (images[j] - scale * images[i0]).is_zero()
                ]
                matches.append(found)
            for i3 in matches[0]:
                for i4 in matches[1]:
                    for i5 in matches[2]:
                        if len({i0, i3, i4, i5}) == 4:
                            order = (i0, i3, i4, i5)
                            holds, residuals = attempt(*order)
                            break
                    if holds:
                        break
                if holds:
                    break
            if holds:
                break
    x0_nonzero = not images[order[0]].is_zero()
    return WitnessReport(
        gamma_exponent=spec.gamma_exponent,
        coordinate_order=order,
        identities_hold=holds,
        x0_nonzero=x0_nonzero,
        residuals=tuple(
            (str(res.even), str(res.odd)) for res in residuals
        ),
        passed=holds and x0_nonzero,
    )
