"""Sparse multivariate Laurent polynomials with exact rational coefficients.

A ring is described by a :class:`VariableTable`: an ordered tuple of variable
names, each flagged invertible or not.  Exponents of invertible variables may
be negative; all other exponents must stay nonnegative.  Polynomials are
stored as a map from exponent vectors to nonzero ``Fraction`` coefficients,
so every computation is exact.  Values are immutable after construction and
all operations are pure functions.
"""

from __future__ import annotations

import re
from fractions import Fraction


class RingError(Exception):
    """Base class for errors raised by this module."""


class ParseError(RingError):
    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class TableMismatchError(RingError):
    pass


class ExponentError(RingError):
    """Negative exponent on a variable that is not invertible."""


class NonUnitError(RingError):
    """A unit (single invertible term) was required."""


class DivisionError(RingError):
    """Exact division failed.  ``remainder`` holds a witness when available."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class VariableTable:
    """Ordered variable names with per-variable invertibility flags."""

    __slots__ = ("names", "invertible", "_index")

    def __init__(self, names, invertible=()):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique: %r" % (names,))
        inv = set(invertible)
        unknown = inv - set(names)
        if unknown:
            raise ValueError("invertible names not in table: %r" % sorted(unknown))
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "invertible", tuple(n in inv for n in names))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, name, value):
        raise AttributeError("VariableTable is immutable")

    def __len__(self):
        return len(self.names)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown variable %r" % name) from None

    def check_exponents(self, exponents):
        for e, inv, name in zip(exponents, self.invertible, self.names):
            if e < 0 and not inv:
                raise ExponentError(
                    "negative exponent %d on non-invertible variable %r" % (e, name)
                )

    def localized(self, *names):
        """Copy of the table with the given variables additionally invertible."""
        inv = [n for n, f in zip(self.names, self.invertible) if f]
        return VariableTable(self.names, tuple(inv) + tuple(names))

    def __eq__(self, other):
        return (
            isinstance(other, VariableTable)
            and self.names == other.names
            and self.invertible == other.invertible
        )

    def __hash__(self):
        return hash((self.names, self.invertible))

    def __repr__(self):
        inv = [n for n, f in zip(self.names, self.invertible) if f]
        return "VariableTable(%r, invertible=%r)" % (self.names, tuple(inv))


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError("expected an int or Fraction, got %r" % (value,))


class LaurentPolynomial:
    """Immutable sparse polynomial over a :class:`VariableTable`.

    ``terms`` maps exponent tuples to nonzero coefficients; zero is the empty
    map.  The canonical term order (used by ``__str__`` and by exact division)
    is descending lexicographic on exponent vectors.
    """

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table, terms):
        clean = {}
        width = len(table)
        for exps, coeff in terms.items():
            coeff = _as_fraction(coeff)
            if not coeff:
                continue
            exps = tuple(exps)
            if len(exps) != width:
                raise ValueError("exponent vector %r has wrong width" % (exps,))
            table.check_exponents(exps)
            clean[exps] = clean.get(exps, Fraction(0)) + coeff
            if not clean[exps]:
                del clean[exps]
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, table):
        return cls(table, {})

    @classmethod
    def constant(cls, table, value):
        return cls(table, {(0,) * len(table): _as_fraction(value)})

    @classmethod
    def one(cls, table):
        return cls.constant(table, 1)

    @classmethod
    def variable(cls, table, name, power=1):
        exps = [0] * len(table)
        exps[table.index(name)] = power
        return cls(table, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, table, exponents, coeff=1):
        """Single term from a ``{name: exponent}`` mapping."""
        exps = [0] * len(table)
        for name, e in exponents.items():
            exps[table.index(name)] = e
        return cls(table, {tuple(exps): _as_fraction(coeff)})

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def is_unit(self):
        """True for a single term supported on invertible variables only."""
        if len(self.terms) != 1:
            return False
        (exps,) = self.terms
        return all(e == 0 or inv for e, inv in zip(exps, self.table.invertible))

    def constant_value(self):
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial %s is not constant" % self)
        return next(iter(self.terms.values()))

    def variables(self):
        """Names of variables occurring with nonzero exponent."""
        seen = set()
        for exps in self.terms:
            for name, e in zip(self.table.names, exps):
                if e:
                    seen.add(name)
        return seen

    def degree(self, name):
        """Largest exponent of ``name``; None for the zero polynomial."""
        if not self.terms:
            return None
        i = self.table.index(name)
        return max(exps[i] for exps in self.terms)

    def valuation(self, name):
        """Smallest exponent of ``name``; None for the zero polynomial."""
        if not self.terms:
            return None
        i = self.table.index(name)
        return min(exps[i] for exps in self.terms)

    def leading_term(self):
        """(exponents, coefficient) for the descending-lex leading term."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        exps = max(self.terms)
        return exps, self.terms[exps]

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.table != self.table:
                raise TableMismatchError(
                    "polynomials over different variable tables"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial.constant(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps, Fraction(0)) + coeff
            if acc:
                terms[exps] = acc
            else:
                terms.pop(exps, None)
        return LaurentPolynomial(self.table, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(
            self.table, {exps: -coeff for exps, coeff in self.terms.items()}
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(exps, Fraction(0)) + c1 * c2
                if acc:
                    terms[exps] = acc
                else:
                    del terms[exps]
        return LaurentPolynomial(self.table, terms)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse of a unit monomial."""
        if not self.is_unit():
            raise NonUnitError("%s is not a unit" % self)
        (exps, coeff), = self.terms.items()
        return LaurentPolynomial(
            self.table, {tuple(-e for e in exps): Fraction(1) / coeff}
        )

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise TypeError("polynomial powers must be integers")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = LaurentPolynomial.one(self.table)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.table, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.table, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- exact division ----------------------------------------------------

    def exact_div(self, den):
        """Exact quotient ``q`` with ``q * den == self``.

        Raises :class:`DivisionError` when no exact quotient exists in the
        ring; for monomial divisors the error carries the non-divisible part
        of the numerator as a remainder witness.
        """
        den = self._coerce(den)
        if den is NotImplemented:
            raise TypeError("cannot divide by %r" % (den,))
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        if den.is_monomial():
            (dexps, dcoeff), = den.terms.items()
            good, bad = {}, {}
            for exps, coeff in self.terms.items():
                shifted = tuple(a - b for a, b in zip(exps, dexps))
                try:
                    self.table.check_exponents(shifted)
                except ExponentError:
                    bad[exps] = coeff
                    continue
                good[shifted] = coeff / dcoeff
            if bad:
                raise DivisionError(
                    "inexact division by monomial %s" % den,
                    remainder=LaurentPolynomial(self.table, bad),
                )
            return LaurentPolynomial(self.table, good)
        return self._general_exact_div(den)

    def _general_exact_div(self, den):
        # Quotient exponents are confined per variable to
        # [val(num) - val(den), deg(num) - deg(den)]; in an integral domain
        # both bounds are additive, so stepping outside the box proves
        # inexactness and also forces termination.
        lo = []
        hi = []
        for i, name in enumerate(self.table.names):
            nv = min(e[i] for e in self.terms)
            nd = max(e[i] for e in self.terms)
            dv = min(e[i] for e in den.terms)
            dd = max(e[i] for e in den.terms)
            lo.append(nv - dv)
            hi.append(nd - dd)
            if nv - dv > nd - dd:
                raise DivisionError("inexact division: %s does not divide %s" % (den, self))
        dexps, dcoeff = den.leading_term()
        rem = self
        qterms = {}
        while not rem.is_zero():
            rexps, rcoeff = rem.leading_term()
            qexps = tuple(a - b for a, b in zip(rexps, dexps))
            if any(q < l or q > h for q, l, h in zip(qexps, lo, hi)):
                raise DivisionError("inexact division: %s does not divide %s" % (den, self))
            try:
                self.table.check_exponents(qexps)
            except ExponentError:
                raise DivisionError(
                    "inexact division: quotient leaves the ring"
                ) from None
            qcoeff = rcoeff / dcoeff
            qterms[qexps] = qcoeff
            rem = rem - LaurentPolynomial(self.table, {qexps: qcoeff}) * den
        return LaurentPolynomial(self.table, qterms)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            coeff = self.terms[exps]
            factors = []
            for name, e in zip(self.table.names, exps):
                if e == 1:
                    factors.append(name)
                elif e != 0:
                    factors.append("%s^%d" % (name, e))
            mag = abs(coeff)
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if not parts:
                parts.append("-" + body if coeff < 0 else body)
            else:
                parts.append((" - " if coeff < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return "<LaurentPolynomial %s>" % self


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/^]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError("unexpected character %r" % stripped[0], pos)
        if m.lastgroup == "int":
            tokens.append(("int", int(m.group("int")), m.start("int")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for the canonical polynomial grammar.

    poly   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := number | name ['^' ['-'] int]
    number := int ['/' int]
    """

    def __init__(self, text, table):
        self.tokens = _tokenize(text)
        self.table = table
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        result = LaurentPolynomial.zero(self.table)
        sign = 1
        kind, value, pos = self.peek()
        if kind == "op" and value in "+-":
            self.next()
            sign = -1 if value == "-" else 1
        result = result + self.term(sign)
        while True:
            kind, value, pos = self.peek()
            if kind == "end":
                return result
            if kind == "op" and value in "+-":
                self.next()
                result = result + self.term(-1 if value == "-" else 1)
            else:
                raise ParseError("expected '+' or '-'", pos)

    def term(self, sign):
        coeff = Fraction(sign)
        exps = [0] * len(self.table)
        coeff, exps = self.factor(coeff, exps)
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value == "*":
                self.next()
                coeff, exps = self.factor(coeff, exps)
            else:
                break
        exps = tuple(exps)
        try:
            self.table.check_exponents(exps)
        except ExponentError as exc:
            raise ParseError(str(exc), self.tokens[self.i - 1][2]) from None
        return LaurentPolynomial(self.table, {exps: coeff})

    def factor(self, coeff, exps):
        kind, value, pos = self.next()
        if kind == "int":
            num = value
            kind, nxt, _ = self.peek()
            if kind == "op" and nxt == "/":
                self.next()
                kind, den, dpos = self.next()
                if kind != "int":
                    raise ParseError("expected an integer denominator", dpos)
                if den == 0:
                    raise ParseError("zero denominator", dpos)
                return coeff * Fraction(num, den), exps
            return coeff * num, exps
        if kind == "name":
            try:
                idx = self.table.index(value)
            except KeyError:
                raise ParseError("unknown variable %r" % value, pos) from None
            power = 1
            kind, nxt, _ = self.peek()
            if kind == "op" and nxt == "^":
                self.next()
                negate = False
                kind, nxt, npos = self.next()
                if kind == "op" and nxt == "-":
                    negate = True
                    kind, nxt, npos = self.next()
                if kind != "int":
                    raise ParseError("expected an integer exponent", npos)
                power = -nxt if negate else nxt
            exps = list(exps)
            exps[idx] += power
            return coeff, exps
        raise ParseError("expected a number or variable", pos)


def parse(text, table):
    """Parse canonical polynomial text over the given table."""
    return _Parser(text, table).parse()


def retabulate(poly, table):
    """Rebuild a polynomial over another table, matching variables by name.

    Variables missing from the new table must not occur in the polynomial;
    fresh variables get exponent zero.  Invertibility flags of the new table
    are enforced on the rebuilt exponents.
    """
    positions = []
    for name in poly.table.names:
        try:
            positions.append(table.index(name))
        except KeyError:
            positions.append(None)
    terms = {}
    for exps, coeff in poly.terms.items():
        rebuilt = [0] * len(table)
        for pos, e, name in zip(positions, exps, poly.table.names):
            if pos is None:
                if e:
                    raise KeyError(
                        "variable %r does not exist in the target table" % name
                    )
            else:
                rebuilt[pos] = e
        terms[tuple(rebuilt)] = coeff
    return LaurentPolynomial(table, terms)


# -- ring homomorphisms ----------------------------------------------------

class RingHomomorphism:
    """Substitution homomorphism determined by per-variable images.

    ``images`` maps every source variable name to a polynomial over the
    target table (strings are parsed).  The image of an invertible source
    variable must be a unit, so that negative exponents can be pushed
    forward.
    """

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        resolved = []
        for name, inv in zip(source.names, source.invertible):
            if name not in images:
                raise ValueError("no image given for variable %r" % name)
            img = images[name]
            if isinstance(img, str):
                img = parse(img, target)
            if img.table != target:
                raise TableMismatchError("image of %r is over the wrong table" % name)
            if inv and not img.is_unit():
                raise NonUnitError(
                    "image of invertible variable %r must be a unit, got %s"
                    % (name, img)
                )
            resolved.append(img)
        extra = set(images) - set(source.names)
        if extra:
            raise ValueError("images given for unknown variables: %r" % sorted(extra))
        self.source = source
        self.target = target
        self.images = tuple(resolved)

    @classmethod
    def identity(cls, table):
        return cls(
            table,
            table,
            {name: LaurentPolynomial.variable(table, name) for name in table.names},
        )

    def __call__(self, poly):
        if poly.table != self.source:
            raise TableMismatchError("polynomial is not over the source table")
        result = LaurentPolynomial.zero(self.target)
        power_cache = {}
        for exps, coeff in poly.terms.items():
            term = LaurentPolynomial.constant(self.target, coeff)
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                key = (i, e)
                if key not in power_cache:
                    power_cache[key] = self.images[i] ** e
                term = term * power_cache[key]
            result = result + term
        return result


# -- quotient by t^2 - f ----------------------------------------------------

class QuotientElement:
    """Element of ``R[t] / (t^2 - f)`` stored as ``even + odd * t``.

    ``even``, ``odd`` and the modulus ``f`` are polynomials free of the
    distinguished variable ``t`` (which must be non-invertible).
    """

    __slots__ = ("even", "odd", "modulus", "var")

    def __init__(self, even, odd, modulus, var):
        table = even.table
        if odd.table != table or modulus.table != table:
            raise TableMismatchError("components over different tables")
        for part, label in ((even, "even"), (odd, "odd"), (modulus, "modulus")):
            if part.degree(var) not in (None, 0):
                raise ValueError("%s part must be free of %r" % (label, var))
        self.even = even
        self.odd = odd
        self.modulus = modulus
        self.var = var

    @classmethod
    def reduce(cls, poly, modulus, var):
        """Reduce a polynomial in ``var`` modulo ``var^2 - modulus``."""
        if modulus.degree(var) not in (None, 0):
            raise ValueError("modulus must be free of %r" % var)
        table = poly.table
        idx = table.index(var)
        even = LaurentPolynomial.zero(table)
        odd = LaurentPolynomial.zero(table)
        for exps, coeff in poly.terms.items():
            e = exps[idx]
            if e < 0:
                raise ExponentError("negative exponent on %r in quotient reduction" % var)
            stripped = list(exps)
            stripped[idx] = 0
            base = LaurentPolynomial(table, {tuple(stripped): coeff})
            k, parity = divmod(e, 2)
            contrib = base * modulus ** k
            if parity:
                odd = odd + contrib
            else:
                even = even + contrib
        return cls(even, odd, modulus, var)

    def _check(self, other):
        if not isinstance(other, QuotientElement):
            raise TypeError("expected a QuotientElement")
        if other.modulus != self.modulus or other.var != self.var:
            raise ValueError("elements of different quotient rings")

    def __add__(self, other):
        self._check(other)
        return QuotientElement(
            self.even + other.even, self.odd + other.odd, self.modulus, self.var
        )

    def __sub__(self, other):
        self._check(other)
        return QuotientElement(
            self.even - other.even, self.odd - other.odd, self.modulus, self.var
        )

    def __neg__(self):
        return QuotientElement(-self.even, -self.odd, self.modulus, self.var)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPolynomial)):
            return QuotientElement(
                self.even * other, self.odd * other, self.modulus, self.var
            )
        self._check(other)
        even = self.even * other.even + self.odd * other.odd * self.modulus
        odd = self.even * other.odd + self.odd * other.even
        return QuotientElement(even, odd, self.modulus, self.var)

    __rmul__ = __mul__

    def is_zero(self):
        return self.even.is_zero() and self.odd.is_zero()

    def __eq__(self, other):
        if not isinstance(other, QuotientElement):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.var == other.var
            and self.even == other.even
            and self.odd == other.odd
        )

    def __hash__(self):
        return hash((self.even, self.odd, self.modulus, self.var))

    def __str__(self):
        return "(%s) + (%s)*%s" % (self.even, self.odd, self.var)
