"""Dense univariate polynomials over a finite field.

A polynomial is a list of encoded field elements, constant term first, with
no trailing zeros (the zero polynomial is ``[]``).  Every function takes the
field as its first argument and never mutates its inputs.
"""

from __future__ import annotations

import random
from array import array
from collections import OrderedDict


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f):
    return len(f) - 1


def add(F, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return trim(out)


def sub(F, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out.append(F.sub(a, b))
    return trim(out)


def scale(F, f, c):
    if c == 0:
        return []
    mul = F.mul
    return [mul(a, c) for a in f]


def mul(F, f, g):
    if not f or not g:
        return []
    fadd, fmul = F.add, F.mul
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = fadd(out[i + j], fmul(a, b))
    return trim(out)


def monic(F, f):
    if not f or f[-1] == 1:
        return list(f)
    return scale(F, f, F.inv(f[-1]))


def divmod_(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    if len(f) <= dg:
        return [], trim(f)
    inv_lc = F.inv(g[-1])
    fsub, fmul = F.sub, F.mul
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c == 0:
            continue
        c = fmul(c, inv_lc)
        q[i - dg] = c
        base = i - dg
        for j, b in enumerate(g):
            if b:
                f[base + j] = fsub(f[base + j], fmul(c, b))
    return trim(q), trim(f[:dg])


def rem(F, f, g):
    return divmod_(F, f, g)[1]


def gcd(F, f, g):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, rem(F, f, g)
    return monic(F, f)


def derivative(F, f):
    return trim([F.mul(F.from_int(i), c) for i, c in enumerate(f)][1:])


def evaluate(F, f, x):
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def mulmod(F, f, g, m):
    return rem(F, mul(F, f, g), m)


def powmod(F, f, e, m):
    ctx = context(F, m) if e > 3 and len(m) > 2 else None
    if ctx is not None:
        return ctx.unpack(ctx.pow(ctx.pack(f), e))
    result = [1]
    base = rem(F, f, m)
    while e:
        if e & 1:
            result = mulmod(F, result, base, m)
        e >>= 1
        if e:
            base = mulmod(F, base, base, m)
    return result


_CODES = {array(c).itemsize: c for c in ("Q", "L", "I", "H")}


class ModContext:
    """Arithmetic in ``F[x]/(m)`` on Kronecker-packed integers.

    A residue of degree ``< r`` is stored as one integer holding ``r``
    coefficient blocks of ``2k - 1`` fixed-width slots; each block holds the
    base-p digits of the coefficient (only the first ``k`` slots are nonzero
    after normalization).  A product is then one big-int multiplication,
    followed by reduction of slot overflow modulo ``p``, of digit degree modulo
    the field modulus, and of ``x``-degree modulo ``m``.
    """

    def __init__(self, F, m):
        m = monic(F, trim(m))
        p, k = F.p, F.k
        r = len(m) - 1
        if r < 1:
            raise ValueError("modulus must have positive degree")
        S = 2 * k - 1
        bound = (2 * r + 2) * k * (p - 1) ** 2 + 2 * p
        for width in (2, 4, 8):
            if width in _CODES and bound < 1 << (8 * width):
                break
        else:
            raise ValueError("characteristic too large for packed arithmetic")
        self.F, self.m, self.p, self.k, self.r, self.S = F, m, p, k, r, S
        self.code, self.width = _CODES[width], width
        self.B = 8 * width
        self.CB = self.B * S
        self.cmask = (1 << self.CB) - 1
        self.kmask = (1 << (self.B * k)) - 1
        # t^(k+i) reduced by the field modulus, i = 0..k-2, packed in k slots
        rows = []
        if k > 1:
            mod = F.modulus
            cur = [(-c) % p for c in mod[:k]]
            for _ in range(k - 1):
                rows.append(self._pack_digits(cur))
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    cur = [(x - top * c) % p for x, c in zip(cur, mod)]
        self.rows = rows
        hneg = 0
        for j in range(r - 1, -1, -1):
            hneg = (hneg << self.CB) | self._pack_digits(F.coeffs(F.neg(m[j])))
        self.hneg = hneg
        self.one = 1

    def _pack_digits(self, digits):
        return int.from_bytes(array(self.code, digits).tobytes(), "little")

    def _slots(self, n, count):
        out = array(self.code)
        out.frombytes(n.to_bytes(count * self.width, "little"))
        return out

    def _reduce_coef(self, v):
        # v: one block of unreduced slots -> normalized k-slot block
        p, k = self.p, self.k
        if k == 1:
            return v % p
        slots = self._slots(v, self.S)
        acc = v & self.kmask
        for c, row in zip(slots[k:], self.rows):
            c %= p
            if c:
                acc += c * row
        return self._pack_digits([d % p for d in self._slots(acc, k)])

    def normalize(self, P):
        """Reduce a packed value of x-degree ``< 2r - 1`` with bounded slots."""
        CB, r = self.CB, self.r
        top = (P.bit_length() + CB - 1) // CB - 1
        for j in range(top, r - 1, -1):
            v = P >> (CB * j)
            if v:
                P -= v << (CB * j)
                c = self._reduce_coef(v)
                if c:
                    P += (c * self.hneg) << (CB * (j - r))
        out = 0
        cmask = self.cmask
        for j in range(r - 1, -1, -1):
            out = (out << CB) | self._reduce_coef((P >> (CB * j)) & cmask)
        return out

    def mul(self, a, b):
        return self.normalize(a * b)

    def pow(self, a, e):
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def pack(self, f):
        F, k, S = self.F, self.k, self.S
        f = rem(F, f, self.m)
        buf = array(self.code, bytes(self.width * S * self.r))
        for j, c in enumerate(f):
            if c:
                buf[j * S:j * S + k] = array(self.code, F.coeffs(c))
        return int.from_bytes(buf.tobytes(), "little")

    def unpack(self, A):
        p, k, S = self.p, self.k, self.S
        slots = self._slots(A, S * self.r)
        out = []
        for j in range(self.r):
            v = 0
            for d in reversed(slots[j * S:j * S + k]):
                v = v * p + d
            out.append(v)
        return trim(out)


_CONTEXTS: OrderedDict = OrderedDict()


def context(F, m):
    """Cached :class:`ModContext` for ``F[x]/(m)``, or ``None`` if unsupported."""
    key = (F.p, F.modulus, tuple(m))
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        try:
            ctx = ModContext(F, m)
        except ValueError:
            return None
        _CONTEXTS[key] = ctx
        if len(_CONTEXTS) > 64:
            _CONTEXTS.popitem(last=False)
    else:
        _CONTEXTS.move_to_end(key)
    return ctx


def is_irreducible(F, f):
    """Ben-Or test: ``f`` has no factor of degree ``<= deg f // 2``."""
    f = monic(F, trim(f))
    n = degree(f)
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        h = powmod(F, h, F.q, f)
        if degree(gcd(F, f, sub(F, h, x))) > 0:
            return False
    return True


def pth_root_poly(F, f):
    """Return ``g`` with ``g(x)^p == f(x)``; requires ``f`` to be a polynomial in ``x^p``."""
    p = F.p
    out = []
    for i in range(0, len(f), p):
        out.append(F.pth_root(f[i]))
    for i, c in enumerate(f):
        if c and i % p:
            raise ValueError("polynomial is not a p-th power")
    return trim(out)


def squarefree_decomposition(F, f):
    """Yun-style decomposition valid in characteristic ``p``.

    Returns ``[(g, e), ...]`` with monic, pairwise coprime, squarefree ``g``
    such that ``f = lc(f) * prod(g**e)``.
    """
    f = monic(F, trim(f))
    if degree(f) < 1:
        return []
    p = F.p
    out = {}

    def record(g, e):
        if degree(g) > 0:
            out[e] = mul(F, out[e], g) if e in out else g

    def run(f, mult):
        df = derivative(F, f)
        if not df:
            for g, e in squarefree_decomposition(F, pth_root_poly(F, f)):
                record(g, e * p * mult)
            return
        c = gcd(F, f, df)
        w = divmod_(F, f, c)[0]
        i = 1
        while degree(w) > 0:
            y = gcd(F, w, c)
            z = divmod_(F, w, y)[0]
            record(monic(F, z), i * mult)
            i += 1
            w = y
            c = divmod_(F, c, y)[0]
        if degree(c) > 0:
            for g, e in squarefree_decomposition(F, pth_root_poly(F, c)):
                record(g, e * p * mult)

    run(f, 1)
    return sorted(((monic(F, g), e) for e, g in out.items()), key=lambda t: t[1])


def distinct_degree(F, f):
    """Split a monic squarefree ``f`` into products of equal-degree irreducibles."""
    out = []
    x = [0, 1]
    h = x
    d = 0
    while degree(f) >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, F.q, f)
        g = gcd(F, f, sub(F, h, x))
        if degree(g) > 0:
            out.append((g, d))
            f = divmod_(F, f, g)[0]
            h = rem(F, h, f)
    if degree(f) > 0:
        out.append((f, degree(f)))
    return out


def _split_candidate(F, f, d, rng):
    n = degree(f)
    a = trim([F.random_element(rng) for _ in range(n)])
    if degree(a) < 1:
        return None
    if F.p == 2:
        # trace map a + a^2 + ... + a^(2^(k d - 1))
        ctx = context(F, f)
        if ctx is not None:
            t = s = ctx.pack(a)
            for i in range(1, F.k * d):
                t = ctx.mul(t, t)
                s += t
                if i % 1024 == 0:
                    s = ctx.normalize(s)
            return ctx.unpack(ctx.normalize(s))
        t = a
        s = a
        for _ in range(F.k * d - 1):
            t = mulmod(F, t, t, f)
            s = add(F, s, t)
        return s
    e = (F.q ** d - 1) // 2
    return sub(F, powmod(F, a, e, f), [1])


def equal_degree(F, f, d, rng):
    """Cantor-Zassenhaus splitting of a monic product of degree-``d`` irreducibles."""
    n = degree(f)
    if n == d:
        return [f]
    while True:
        b = _split_candidate(F, f, d, rng)
        if b is None:
            continue
        g = gcd(F, f, b)
        if 0 < degree(g) < n:
            h = divmod_(F, f, g)[0]
            return equal_degree(F, g, d, rng) + equal_degree(F, monic(F, h), d, rng)


def factor(F, f, seed=0):
    """Full factorization into ``(monic irreducible, exponent)`` pairs, sorted."""
    rng = random.Random(seed)
    out = []
    for g, e in squarefree_decomposition(F, f):
        for h, d in distinct_degree(F, g):
            for piece in equal_degree(F, h, d, rng):
                out.append((monic(F, piece), e))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return out


def roots(F, f, seed=0):
    """All distinct roots of ``f`` in ``F``, sorted by encoding."""
    f = monic(F, trim(f))
    if degree(f) < 1:
        return []
    # only the part splitting over F matters: gcd with x^q - x
    g = gcd(F, f, sub(F, powmod(F, [0, 1], F.q, f), [0, 1]))
    if degree(g) < 1:
        return []
    rng = random.Random(seed)
    lin = equal_degree(F, g, 1, rng)
    return sorted(F.neg(h[0]) for h in lin)
