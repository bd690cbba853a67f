"""Exact multivariate Laurent polynomials in A and the lambda family.

Variables are small tuples:

    A          -> ('A',)
    lambda     -> ('l',)
    lambda_ij  -> ('l', i, j)  with i < j

A monomial is a tuple of (variable, exponent) pairs sorted by variable,
exponents nonzero (possibly negative).  A polynomial is a dict from
monomial to a nonzero Python int, so all arithmetic is exact and
coefficients are arbitrary precision.

The canonical term order sorts variables A < lambda < lambda_ij (pairs by
(i, j)) and, within a variable, larger exponents first; the constant term
comes last.  Serialisation under that order makes polynomial equality
equal to string equality.

Grammar of the textual form (also accepted by :func:`parse_poly`):

    poly     = term (('+'|'-') term)*
    term     = [int] ('*'? factor)*
    factor   = var ('^' int)?
    var      = 'A' | 'l' | 'l' d d | 'l' int '_' int    (d a single digit)

Examples: ``-A^3*l``, ``A^2*l12*l34+l12*l34``, ``-A^2-A^-2``, ``0``.
"""

from __future__ import annotations

import re

from .errors import NegativeExponentSubstitution

A = ("A",)
LAM = ("l",)


def lam_pair(i, j):
    """The ordered-bracket variable lambda_{ij}; indices are sorted."""
    if i == j:
        raise ValueError("lambda pair needs two distinct labels")
    if i > j:
        i, j = j, i
    return ("l", i, j)


def _var_key(v):
    if v == A:
        return (0,)
    if v == LAM:
        return (1,)
    return (2, v[1], v[2])


def _mono_key(mono):
    # descending exponents, constants last (sentinel pads short monomials)
    return tuple(( _var_key(v), -e) for v, e in mono) + (((99,), 0),)


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        n = d.get(v, 0) + e
        if n:
            d[v] = n
        else:
            del d[v]
    return tuple(sorted(d.items(), key=lambda p: _var_key(p[0])))


class LaurentPoly:
    """Immutable exact Laurent polynomial; supports +, -, *, ** and substitution."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for mono, c in dict(terms).items():
                if c:
                    t[mono] = c
        self._t = t
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        return cls({(): c} if c else {})

    @classmethod
    def var(cls, v, exp=1, coeff=1):
        if exp == 0:
            return cls.const(coeff)
        return cls({((v, exp),): coeff})

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        t = dict(self._t)
        for m, c in other._t.items():
            n = t.get(m, 0) + c
            if n:
                t[m] = n
            else:
                t.pop(m, None)
        return LaurentPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        t = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                n = t.get(m, 0) + c1 * c2
                if n:
                    t[m] = n
                else:
                    del t[m]
        return LaurentPoly(t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.unit_inverse() ** (-k)
        result = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def unit_inverse(self):
        """Inverse of a monomial with coefficient +-1 (the only units we need)."""
        if len(self._t) != 1:
            raise NegativeExponentSubstitution("not a unit: %s" % self)
        (mono, c), = self._t.items()
        if c not in (1, -1):
            raise NegativeExponentSubstitution("not a unit: %s" % self)
        return LaurentPoly({tuple((v, -e) for v, e in mono): c})

    # -- queries -------------------------------------------------------

    def is_zero(self):
        return not self._t

    def variables(self):
        vs = set()
        for m in self._t:
            for v, _ in m:
                vs.add(v)
        return vs

    def coefficient(self, mono):
        return self._t.get(tuple(sorted(mono, key=lambda p: _var_key(p[0]))), 0)

    def terms(self):
        return dict(self._t)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __bool__(self):
        return bool(self._t)

    # -- substitution ---------------------------------------------------

    def substitute(self, mapping):
        """Replace variables simultaneously; values are LaurentPoly or int.

        Raises NegativeExponentSubstitution if a variable occurring with a
        negative exponent maps to anything but a unit monomial.
        """
        mapping = {v: _coerce(p) for v, p in mapping.items()}
        out = LaurentPoly.zero()
        for mono, c in self._t.items():
            term = LaurentPoly.const(c)
            for v, e in mono:
                if v in mapping:
                    target = mapping[v]
                    if e < 0:
                        term = term * target.unit_inverse() ** (-e)
                    else:
                        term = term * target ** e
                else:
                    term = term * LaurentPoly.var(v, e)
            out = out + term
        return out

    def mirror(self):
        """A -> A^-1 (bracket of the mirror diagram)."""
        return self.substitute({A: LaurentPoly.var(A, -1)})

    # -- text form -------------------------------------------------------

    def __str__(self):
        return serialize_poly(self)

    __repr__ = __str__


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError("cannot coerce %r to LaurentPoly" % (x,))


def poly_add(p, q):
    return _coerce(p) + _coerce(q)


def poly_mul(p, q):
    return _coerce(p) * _coerce(q)


def poly_substitute(p, mapping):
    return _coerce(p).substitute(mapping)


DELTA = LaurentPoly({((A, 2),): -1, ((A, -2),): -1})  # loop value -A^2 - A^-2
MINUS_A3 = LaurentPoly({((A, 3),): -1})


def _var_str(v):
    if v == A:
        return "A"
    if v == LAM:
        return "l"
    _, i, j = v
    if i <= 9 and j <= 9:
        return "l%d%d" % (i, j)
    return "l%d_%d" % (i, j)


def serialize_poly(p):
    p = _coerce(p)
    if not p._t:
        return "0"
    out = []
    for mono, c in sorted(p._t.items(), key=lambda kv: _mono_key(kv[0])):
        parts = []
        if abs(c) != 1 or not mono:
            parts.append(str(abs(c)))
        for v, e in mono:
            parts.append(_var_str(v) if e == 1 else "%s^%d" % (_var_str(v), e))
        s = "*".join(parts)
        if not out:
            out.append(("-" if c < 0 else "") + s)
        else:
            out.append(("-" if c < 0 else "+") + s)
    return "".join(out)


_TERM_SPLIT = re.compile(r"(?<!\^)(?=[+-])")
_FACTOR = re.compile(
    r"""^(?:
        (?P<int>\d+)
        | (?P<var>A | l\d_\d+ | l\d\d(?!\d) | l\d+_\d+ | l)
          (?:\^(?P<exp>-?\d+))?
        )$""",
    re.VERBOSE,
)


def _parse_var(s):
    if s == "A":
        return A
    if s == "l":
        return LAM
    body = s[1:]
    if "_" in body:
        i, j = body.split("_")
        return lam_pair(int(i), int(j))
    if len(body) == 2:
        return lam_pair(int(body[0]), int(body[1]))
    raise ValueError("bad variable %r" % s)


def parse_poly(text):
    """Parse the canonical polynomial grammar; inverse of serialize_poly."""
    text = text.strip().replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    if text == "0":
        return LaurentPoly.zero()
    total = LaurentPoly.zero()
    for chunk in _TERM_SPLIT.split(text):
        if not chunk:
            continue
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:]
        if not chunk:
            raise ValueError("dangling sign in polynomial")
        coeff = sign
        mono = {}
        for factor in chunk.split("*"):
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError("bad factor %r" % factor)
            if m.group("int") is not None:
                coeff *= int(m.group("int"))
            else:
                v = _parse_var(m.group("var"))
                e = int(m.group("exp")) if m.group("exp") else 1
                mono[v] = mono.get(v, 0) + e
        mono = tuple(sorted(((v, e) for v, e in mono.items() if e),
                            key=lambda p: _var_key(p[0])))
        total = total + LaurentPoly({mono: coeff})
    return total
