"""Sparse multivariate polynomials over finite fields.

Monomials are packed into Python ints with 16 bits per variable, ``x0`` in the
most significant field.  Multiplying monomials is integer addition and
divisibility is a single mask test; exponents must stay below ``2**15``.
"""

from __future__ import annotations

import re
from math import comb

from .ff import FieldElement, FiniteField, embedding, parse_element

BITS = 16
FIELD_MASK = (1 << BITS) - 1
GUARD_BIT = 1 << (BITS - 1)


class RingMismatch(ValueError):
    """Operands live in different polynomial rings."""


class ParseError(ValueError):
    """Malformed polynomial text."""


class MonomialOrder:
    """``lex``, ``grevlex`` or ``block`` elimination of the first ``block`` variables.

    Inside each block of a block order the comparison is grevlex.
    """

    KINDS = ("lex", "grevlex", "block")

    def __init__(self, kind: str = "grevlex", block: int | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and (block is None or block < 1):
            raise ValueError("block order needs a positive first-block size")
        self.kind = kind
        self.block = block if kind == "block" else None

    @property
    def name(self) -> str:
        return f"block({self.block})" if self.kind == "block" else self.kind

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.block) == (other.kind, other.block)

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        return f"MonomialOrder({self.name})"

    def key_function(self, n: int):
        """Map packed monomials of an ``n``-variable ring to ints ordered like the monomials."""
        if self.kind == "lex":
            return lambda m: m
        if self.kind == "grevlex":
            return _grevlex_key(0, n, n)
        b = self.block
        if b >= n:
            return _grevlex_key(0, n, n)
        first = _grevlex_key(0, b, n)
        rest = _grevlex_key(b, n, n)
        shift = BITS * (n - b + 1)
        return lambda m: (first(m) << shift) + rest(m)


def _grevlex_key(lo, hi, n):
    # key = (degree, then smaller exponent of the last variable wins, ...)
    width = hi - lo
    full = (1 << (BITS * width)) - 1
    shifts = [BITS * (n - 1 - i) for i in range(lo, hi)]

    def key(m):
        deg = 0
        rev = 0
        for j, s in enumerate(shifts):
            e = (m >> s) & FIELD_MASK
            deg += e
            rev |= e << (BITS * j)
        return (deg << (BITS * width)) + (full - rev)

    return key


def parse_order(text) -> MonomialOrder:
    if isinstance(text, MonomialOrder):
        return text
    m = re.fullmatch(r"block\((\d+)\)", text)
    if m:
        return MonomialOrder("block", int(m.group(1)))
    return MonomialOrder(text)


class PolynomialRing:
    """``field[names...]`` with a fixed monomial order."""

    def __init__(self, field: FiniteField, names, order="grevlex"):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        self.field = field
        self.names = names
        self.n = len(names)
        self.order = parse_order(order)
        self._shifts = [BITS * (self.n - 1 - i) for i in range(self.n)]
        self.guard = sum(GUARD_BIT << s for s in self._shifts)
        keyf = self.order.key_function(self.n)
        cache: dict[int, int] = {}

        def key(m):
            k = cache.get(m)
            if k is None:
                k = cache[m] = keyf(m)
            return k

        self.key = key

    # -- identity ----------------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialRing)
            and self.field is other.field
            and self.names == other.names
            and self.order == other.order
        )

    def __hash__(self):
        return hash((id(self.field), self.names, self.order))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.names)}] ({self.order.name})"

    def with_order(self, order) -> "PolynomialRing":
        order = parse_order(order)
        if order == self.order:
            return self
        return PolynomialRing(self.field, self.names, order)

    def with_field(self, field: FiniteField) -> "PolynomialRing":
        if field is self.field:
            return self
        return PolynomialRing(field, self.names, self.order)

    # -- monomials ---------------------------------------------------------------------

    def monomial(self, exps) -> int:
        m = 0
        for e, s in zip(exps, self._shifts):
            if e < 0 or e >= GUARD_BIT:
                raise ValueError("exponent out of range")
            m |= e << s
        return m

    def exponents(self, m: int) -> tuple[int, ...]:
        return tuple((m >> s) & FIELD_MASK for s in self._shifts)

    def mono_degree(self, m: int) -> int:
        return sum((m >> s) & FIELD_MASK for s in self._shifts)

    def divides(self, a: int, m: int) -> bool:
        g = self.guard
        return ((m | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        out = 0
        for s in self._shifts:
            x = (a >> s) & FIELD_MASK
            y = (b >> s) & FIELD_MASK
            out |= (x if x > y else y) << s
        return out

    def var_mono(self, i: int) -> int:
        return 1 << self._shifts[i]

    # -- constructors ------------------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: 1})

    def const(self, c) -> "Polynomial":
        c = self._coerce(c)
        return Polynomial(self, {0: c} if c else {})

    def gen(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        return Polynomial(self, {self.var_mono(i): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.n)]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in {self!r}") from None

    def from_dict(self, terms: dict) -> "Polynomial":
        """Build from ``{exponent tuple: coefficient}``."""
        out = {}
        F = self.field
        for exps, c in terms.items():
            c = self._coerce(c)
            if c:
                m = self.monomial(exps)
                out[m] = F.add(out.get(m, 0), c)
                if not out[m]:
                    del out[m]
        return Polynomial(self, out)

    def _coerce(self, c) -> int:
        if isinstance(c, FieldElement):
            if c.field is not self.field:
                raise RingMismatch("coefficient from a different field")
            return c.value
        if isinstance(c, (list, tuple)):
            return self.field.from_coeffs(c)
        return self.field.from_int(int(c))

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value.in_ring(self)
        if isinstance(value, str):
            return parse_polynomial(self, value)
        return self.const(value)


class Polynomial:
    """Immutable sparse polynomial: ``terms`` maps packed monomials to encoded coefficients."""

    __slots__ = ("ring", "terms", "_sorted")

    def __init__(self, ring: PolynomialRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._sorted = None

    # -- basic queries -----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[int, int]]:
        """Terms in strictly decreasing monomial order."""
        if self._sorted is None:
            key = self.ring.key
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def lm(self) -> int:
        return self.sorted_terms()[0][0]

    def lc(self) -> int:
        return self.sorted_terms()[0][1]

    def leading_exponents(self) -> tuple[int, ...]:
        return self.ring.exponents(self.lm())

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.ring.mono_degree(m) for m in self.terms)

    def degree_in(self, i: int) -> int:
        s = self.ring._shifts[i]
        return max(((m >> s) & FIELD_MASK for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(m == 0 for m in self.terms)

    def constant_coeff(self) -> int:
        return self.terms.get(0, 0)

    def is_homogeneous(self) -> bool:
        degs = {self.ring.mono_degree(m) for m in self.terms}
        return len(degs) <= 1

    def variables(self) -> set[int]:
        out = set()
        for m in self.terms:
            for i, e in enumerate(self.ring.exponents(m)):
                if e:
                    out.add(i)
        return out

    def coefficient(self, exps) -> FieldElement:
        return FieldElement(self.ring.field, self.terms.get(self.ring.monomial(exps), 0))

    def as_dict(self) -> dict:
        return {self.ring.exponents(m): c for m, c in self.terms.items()}

    # -- arithmetic --------------------------------------------------------------------

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._check(other)
        F = self.ring.field
        out = dict(self.terms)
        add = F.add
        for m, c in other.terms.items():
            v = add(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        sub = self.ring.field.sub
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = sub(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(self.ring._coerce(other))
        other = self._check(other)
        F = self.ring.field
        add, mul = F.add, F.mul
        out: dict[int, int] = {}
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                v = add(out.get(m, 0), mul(ca, cb))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: int) -> "Polynomial":
        if not c:
            return self.ring.zero()
        mul = self.ring.field.mul
        return Polynomial(self.ring, {m: mul(v, c) for m, v in self.terms.items()})

    def mul_monomial(self, mono: int, c: int = 1) -> "Polynomial":
        mul = self.ring.field.mul
        return Polynomial(self.ring, {m + mono: mul(v, c) for m, v in self.terms.items() if mul(v, c)})

    def div_monomial(self, mono: int) -> "Polynomial":
        """Exact division by a monomial."""
        R = self.ring
        if not all(R.divides(mono, m) for m in self.terms):
            raise ValueError("monomial does not divide the polynomial")
        return Polynomial(R, {m - mono: c for m, c in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc()))

    def exact_div(self, g: "Polynomial") -> "Polynomial":
        """Quotient ``self / g``; raises if the division leaves a remainder."""
        g = self._check(g)
        R = self.ring
        F = R.field
        glm, glc = g.lm(), g.lc()
        inv = F.inv(glc)
        rem = dict(self.terms)
        quot: dict[int, int] = {}
        key = R.key
        while rem:
            m = max(rem, key=key)
            if not R.divides(glm, m):
                raise ValueError("division leaves a remainder")
            c = F.mul(rem[m], inv)
            q = m - glm
            quot[q] = c
            for mg, cg in g.terms.items():
                mm = mg + q
                v = F.sub(rem.get(mm, 0), F.mul(c, cg))
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return Polynomial(R, quot)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus ----------------------------------------------------------------------

    def diff(self, i: int) -> "Polynomial":
        R = self.ring
        F = R.field
        s = R._shifts[i]
        one = 1 << s
        out = {}
        for m, c in self.terms.items():
            e = (m >> s) & FIELD_MASK
            if e:
                v = F.mul(c, F.from_int(e))
                if v:
                    out[m - one] = v
        return Polynomial(R, out)

    def hasse2(self, i: int) -> "Polynomial":
        """Second Hasse derivative in ``x_i``: coefficientwise ``C(j, 2) x_i^(j-2)``."""
        R = self.ring
        F = R.field
        s = R._shifts[i]
        two = 2 << s
        out = {}
        for m, c in self.terms.items():
            e = (m >> s) & FIELD_MASK
            if e >= 2:
                v = F.mul(c, F.from_int(comb(e, 2)))
                if v:
                    out[m - two] = v
        return Polynomial(R, out)

    def second_derivative(self, i: int, j: int) -> "Polynomial":
        """Hasse on the diagonal, ordinary mixed partial off it."""
        if i == j:
            return self.hasse2(i)
        return self.diff(i).diff(j)

    # -- evaluation and substitution ---------------------------------------------------

    def evaluate(self, point, field: FiniteField | None = None) -> int:
        """Value at ``point`` (encoded elements of ``field``, default the ring's field)."""
        R = self.ring
        K = field or R.field
        if len(point) != R.n:
            raise ValueError("point has the wrong number of coordinates")
        emb = embedding(R.field, K)
        pts = [p.value if isinstance(p, FieldElement) else p for p in point]
        powers = [dict() for _ in pts]
        acc = 0
        for m, c in self.terms.items():
            v = emb(c)
            for i, e in enumerate(R.exponents(m)):
                if e:
                    cache = powers[i]
                    pw = cache.get(e)
                    if pw is None:
                        pw = cache[e] = K.pow(pts[i], e)
                    v = K.mul(v, pw)
                    if not v:
                        break
            acc = K.add(acc, v)
        return acc

    def substitute(self, images, ring: PolynomialRing | None = None) -> "Polynomial":
        """Replace ``x_i`` by ``images[i]`` (polynomials of ``ring`` or constants)."""
        R = self.ring
        if len(images) != R.n:
            raise ValueError("need one image per variable")
        target = ring
        if target is None:
            for im in images:
                if isinstance(im, Polynomial):
                    target = im.ring
                    break
            else:
                target = R
        ims = [im if isinstance(im, Polynomial) else target.const(im) for im in images]
        emb = embedding(R.field, target.field)
        power_cache: list[dict[int, Polynomial]] = [dict() for _ in ims]

        def power(i, e):
            cache = power_cache[i]
            if e not in cache:
                if e == 1:
                    cache[e] = ims[i]
                else:
                    half = power(i, e // 2)
                    sq = half * half
                    cache[e] = sq * ims[i] if e % 2 else sq
            return cache[e]

        out = {}
        K = target.field
        for m, c in self.terms.items():
            term = Polynomial(target, {0: emb(c)})
            for i, e in enumerate(R.exponents(m)):
                if e:
                    term = term * power(i, e)
                    if not term:
                        break
            for mm, cc in term.terms.items():
                v = K.add(out.get(mm, 0), cc)
                if v:
                    out[mm] = v
                else:
                    out.pop(mm, None)
        return Polynomial(target, out)

    def substitute_linear(self, M) -> "Polynomial":
        """Coordinate change ``x -> M x`` with ``M`` an invertible matrix over the field."""
        R = self.ring
        F = R.field
        rows = [[R._coerce(a) for a in row] for row in M]
        if len(rows) != R.n or any(len(r) != R.n for r in rows):
            raise ValueError("matrix size does not match the ring")
        if rank(F, rows) < R.n:
            raise ValueError("singular coordinate change")
        gens = R.gens()
        images = []
        for row in rows:
            im = R.zero()
            for a, g in zip(row, gens):
                if a:
                    im = im + g.scale(a)
            images.append(im)
        return self.substitute(images, R)

    def map_coefficients(self, ring: PolynomialRing) -> "Polynomial":
        """Same polynomial in a ring with the same variables over an extension field."""
        if ring.names != self.ring.names:
            raise RingMismatch("variable names differ")
        emb = embedding(self.ring.field, ring.field)
        return Polynomial(ring, {m: emb(c) for m, c in self.terms.items()})

    def in_ring(self, ring: PolynomialRing) -> "Polynomial":
        """Re-home into a ring whose variables include ours (by name)."""
        if ring == self.ring:
            return self
        if ring.names == self.ring.names:
            if ring.field is not self.ring.field:
                return self.map_coefficients(ring)
            return Polynomial(ring, dict(self.terms))
        idx = [ring.index(nm) for nm in self.ring.names]
        emb = embedding(self.ring.field, ring.field)
        out = {}
        for m, c in self.terms.items():
            ex = [0] * ring.n
            for i, e in zip(idx, self.ring.exponents(m)):
                ex[i] = e
            out[ring.monomial(ex)] = emb(c)
        return Polynomial(ring, out)

    # -- printing ----------------------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


# -- module-level operations ---------------------------------------------------------------


def hasse_second_derivative(F: Polynomial, i: int) -> Polynomial:
    return F.hasse2(i)


def gradient_dot(F: Polynomial, v) -> Polynomial:
    """``sum_i F_{x_i} * v_i``."""
    R = F.ring
    if len(v) != R.n:
        raise ValueError("vector length must equal the number of variables")
    out = R.zero()
    for i, vi in enumerate(v):
        vi = vi if isinstance(vi, Polynomial) else R.const(vi)
        if vi:
            out = out + F.diff(i) * vi
    return out


def hessian_form(F: Polynomial, v) -> Polynomial:
    """``sum_{i <= j} F_{x_i x_j / 2} * v_i v_j`` with Hasse derivatives on the diagonal."""
    R = F.ring
    if len(v) != R.n:
        raise ValueError("vector length must equal the number of variables")
    vs = [vi if isinstance(vi, Polynomial) else R.const(vi) for vi in v]
    out = R.zero()
    for i in range(R.n):
        if not vs[i]:
            continue
        for j in range(i, R.n):
            if vs[j]:
                out = out + F.second_derivative(i, j) * vs[i] * vs[j]
    return out


def evaluate(F: Polynomial, point, field=None) -> int:
    return F.evaluate(point, field)


def substitute_linear(F: Polynomial, M) -> Polynomial:
    return F.substitute_linear(M)


def chart_ring(ring: PolynomialRing, chart: int) -> PolynomialRing:
    names = ring.names[:chart] + ring.names[chart + 1:]
    return PolynomialRing(ring.field, names, ring.order)


def dehomogenize(F: Polynomial, chart: int, ring: PolynomialRing | None = None) -> Polynomial:
    """Set ``x_chart = 1``; the result lives in the ring without that variable."""
    R = F.ring
    target = ring or chart_ring(R, chart)
    K = R.field
    out = {}
    for m, c in F.terms.items():
        ex = list(R.exponents(m))
        del ex[chart]
        mm = target.monomial(ex)
        v = K.add(out.get(mm, 0), c)
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return Polynomial(target, out)


def homogenize(f: Polynomial, d: int, chart: int, ring: PolynomialRing) -> Polynomial:
    """Insert ``x_chart`` (index in ``ring``) to make every term of degree ``d``."""
    R = f.ring
    if f.total_degree() > d:
        raise ValueError("target degree is below the polynomial degree")
    out = {}
    for m, c in f.terms.items():
        ex = list(R.exponents(m))
        ex.insert(chart, d - sum(ex))
        out[ring.monomial(ex)] = c
    return Polynomial(ring, out)


def rank(F: FiniteField, rows) -> int:
    """Rank of a matrix of encoded elements (Gaussian elimination)."""
    return len(row_echelon(F, rows)[1])


def row_echelon(F: FiniteField, rows):
    """Reduced row echelon form; returns ``(rows, pivot columns)``."""
    A = [list(r) for r in rows]
    if not A:
        return A, []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(x, inv) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def nullspace(F: FiniteField, rows, ncols: int):
    """Basis of the right kernel of ``rows`` (each row has ``ncols`` entries)."""
    A, pivots = row_echelon(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            if A[r][fc]:
                v[pc] = F.neg(A[r][fc])
        basis.append(v)
    return basis


# -- text grammar -------------------------------------------------------------------------


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    R = f.ring
    F = R.field
    parts = []
    for m, c in f.sorted_terms():
        factors = []
        for name, e in zip(R.names, R.exponents(m)):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        coeff = F.format(c)
        if not factors:
            parts.append(coeff)
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append("*".join([coeff] + factors))
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(\[[^\]]*\])|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group(1):
            out.append(("int", m.group(1)))
        elif m.group(2):
            out.append(("elt", m.group(2)))
        elif m.group(3):
            out.append(("var", m.group(3)))
        else:
            op = m.group(4)
            out.append(("op", "^" if op == "**" else op))
    return out


def parse_polynomial(ring: PolynomialRing, text: str) -> Polynomial:
    """Parse sums/products/powers of variables, integers and ``[a,b,...]`` constants."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = term()
        if sign < 0:
            acc = -acc
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = power()
        while True:
            tok = peek()
            if tok == ("op", "*"):
                take()
                acc = acc * power()
            elif tok[0] in ("int", "elt", "var") or tok == ("op", "("):
                acc = acc * power()
            else:
                return acc

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer")
            return base ** int(val)
        return base

    def atom():
        kind, val = take()
        if kind == "int":
            return ring.const(int(val))
        if kind == "elt":
            c = parse_element(ring.field, val)
            return Polynomial(ring, {0: c} if c else {})
        if kind == "var":
            if val not in ring.names:
                raise ParseError(f"unknown variable {val!r}")
            return ring.gen(val)
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ParseError("missing closing parenthesis")
            return inner
        if (kind, val) == ("op", "-"):
            return -atom()
        raise ParseError(f"unexpected token {val!r}")

    if not tokens:
        raise ParseError("empty polynomial")
    result = expr()
    if pos != len(tokens):
        raise ParseError(f"trailing input near token {tokens[pos][1]!r}")
    return result


def monomials_of_degree(n: int, d: int):
    """Exponent tuples of total degree ``d`` in ``n`` variables, lex descending."""
    if n == 1:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - e):
            yield (e,) + rest


def all_monomials_up_to(n: int, d: int):
    for k in range(d + 1):
        yield from monomials_of_degree(n, k)


__all__ = [
    "MonomialOrder",
    "PolynomialRing",
    "Polynomial",
    "hasse_second_derivative",
    "gradient_dot",
    "hessian_form",
    "evaluate",
    "substitute_linear",
    "dehomogenize",
    "homogenize",
    "chart_ring",
    "parse_polynomial",
    "format_polynomial",
    "rank",
    "row_echelon",
    "nullspace",
    "monomials_of_degree",
    "all_monomials_up_to",
]
