"""Finite fields GF(p^k) as F_p[t]/(m(t)).

Elements are encoded as Python ints: the coefficient vector ``(c_0, ..., c_{k-1})``
of the representative polynomial is stored as ``sum(c_i * p**i)``.  Zero is
``0`` and one is ``1`` in every field, so truthiness means "nonzero".

Field objects expose the arithmetic as bound callables (``F.add``, ``F.mul``,
...) working on encoded ints; :class:`FieldElement` is a thin value wrapper
for interactive use.
"""

from __future__ import annotations

import random
from array import array
import re
import threading

from . import upoly

TABLE_LIMIT = 1 << 16


class FieldError(ValueError):
    """Invalid field description or mismatched operands."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit integers."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def random_irreducible(p: int, k: int, seed: int = 0) -> tuple[int, ...]:
    """A monic irreducible polynomial of degree ``k`` over F_p.

    Returned as a coefficient tuple, constant term first (length ``k + 1``).
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("degree must be at least 1")
    rng = random.Random(seed)
    if k == 1:
        return (rng.randrange(p), 1)
    Fp = prime_field(p)
    for _ in range(64 * k):
        cand = [rng.randrange(p) for _ in range(k)] + [1]
        if cand[0] == 0:
            continue
        if upoly.is_irreducible(Fp, cand):
            return tuple(cand)
    raise RuntimeError(f"no irreducible polynomial of degree {k} over F_{p} found in {64 * k} trials")


class FiniteField:
    """The field F_p[t]/(modulus).

    Use :func:`GF` to obtain instances; fields with equal ``(p, modulus)`` are
    shared, so identity comparison is enough almost everywhere.
    """

    def __init__(self, p: int, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if modulus is None or len(modulus) == 2:
            modulus = None
            k = 1
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if modulus[-1] != 1:
                raise FieldError("modulus must be monic")
            k = len(modulus) - 1
            if not upoly.is_irreducible(prime_field(p), list(modulus)):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = modulus
        self.zero = 0
        self.one = 1
        self._setup_digits()
        if k == 1:
            self._setup_prime()
        elif self.q <= TABLE_LIMIT:
            self._setup_tables()
        elif p == 2:
            self._setup_binary()
        else:
            self._setup_vector()
        self.frobenius = lambda a: self.pow(a, p)
        self.pth_root = lambda a: self.pow(a, self.q // p) if k > 1 else a

    # -- construction of the arithmetic -------------------------------------------------

    def _setup_prime(self):
        p = self.p

        def add(a, b):
            s = a + b
            return s - p if s >= p else s

        def sub(a, b):
            s = a - b
            return s + p if s < 0 else s

        def neg(a):
            return p - a if a else 0

        def mul(a, b):
            return a * b % p

        def inv(a):
            if a == 0:
                raise ZeroDivisionError("inverse of zero in GF(%d)" % p)
            return pow(a, p - 2, p)

        self.add, self.sub, self.neg, self.mul, self.inv = add, sub, neg, mul, inv

    def _vec_mul(self, a, b):
        # schoolbook product of digit vectors, reduced with the nonzero terms of
        # the modulus only; used for table construction and as a fallback
        p, k = self.p, self.k
        da = self.coeffs(a)
        db = self.coeffs(b)
        nb = [(j, y) for j, y in enumerate(db) if y]
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in nb:
                    prod[i + j] += x * y
        tail = self._tail
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % p
            if c:
                base = i - k
                for j, m in tail:
                    prod[base + j] -= c * m
        return self.from_coeffs([c % p for c in prod[:k]])

    def _setup_packed(self):
        # Kronecker substitution: digit vectors become integers with one
        # fixed-width slot per digit, so a product is one big-int multiply.
        # Slots must hold sums of up to 2k products of residues.
        p, k = self.p, self.k
        bound = 2 * k * (p - 1) ** 2 + p
        for code in ("H", "I", "L", "Q"):
            width = array(code).itemsize
            if width in (2, 4, 8) and bound < 1 << (8 * width):
                break
        else:
            return False
        self._pack_code, self._pack_bytes = code, width
        shift = 8 * width
        # packed rows of t^(k+i) mod modulus, i = 0..k-2
        rows = []
        cur = [(-c) % p for c in self.modulus[:k]]
        for _ in range(k - 1):
            rows.append(self._pack(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(x - top * m) % p for x, m in zip(cur, self.modulus)]
        self._rows = rows
        self._low_mask = (1 << (shift * k)) - 1
        self._shift = shift
        return True

    def _pack(self, digits):
        return int.from_bytes(array(self._pack_code, digits).tobytes(), "little")

    def _unpack(self, n, count):
        out = array(self._pack_code)
        out.frombytes(n.to_bytes(count * self._pack_bytes, "little"))
        return out

    def _packed_mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        p, k = self.p, self.k
        prod = self._pack(self.coeffs(a)) * self._pack(self.coeffs(b))
        high = self._unpack(prod >> (self._shift * k), k - 1)
        acc = prod & self._low_mask
        for c, row in zip(high, self._rows):
            c %= p
            if c:
                acc += c * row
        out = 0
        for c in reversed(self._unpack(acc, k)):
            out = out * p + c % p
        return out

    def _vec_add(self, a, b, sign=1):
        p = self.p
        da, db = self.coeffs(a), self.coeffs(b)
        if sign > 0:
            return self.from_coeffs([(x + y) % p for x, y in zip(da, db)])
        return self.from_coeffs([(x - y) % p for x, y in zip(da, db)])

    def _inv_euclid(self, a):
        # extended Euclid in F_p[t]: s*a + (...)*modulus = 1
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d^%d)" % (self.p, self.k))
        Fp = prime_field(self.p)
        r0, r1 = list(self.modulus), upoly.trim(self.coeffs(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            quo, rem = upoly.divmod_(Fp, r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, upoly.sub(Fp, s0, upoly.mul(Fp, quo, s1))
        c = Fp.inv(r1[0])
        return self.from_coeffs(upoly.scale(Fp, s1, c))

    def _setup_tables(self):
        p, q = self.p, self.q
        n = q - 1
        g = self._find_generator()
        exp = [0] * (2 * n)
        log = [0] * q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._vec_mul(x, g)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp, self._log, self.generator = exp, log, g

        def mul(a, b):
            if a == 0 or b == 0:
                return 0
            return exp[log[a] + log[b]]

        def inv(a):
            if a == 0:
                raise ZeroDivisionError("inverse of zero in GF(%d)" % q)
            return exp[n - log[a]]

        if p == 2:
            def add(a, b):
                return a ^ b

            sub = add

            def neg(a):
                return a
        else:
            # Zech logarithms: 1 + g^d = g^zech[d]  (zech[d] = -1 when the sum is 0)
            zech = [0] * n
            for d in range(n):
                s = self._vec_add(1, exp[d])
                zech[d] = log[s] if s else -1
            half = n // 2

            def add(a, b):
                if a == 0:
                    return b
                if b == 0:
                    return a
                la = log[a]
                z = zech[(log[b] - la) % n]
                if z < 0:
                    return 0
                return exp[la + z]

            def neg(a):
                if a == 0:
                    return 0
                return exp[log[a] + half]

            def sub(a, b):
                if b == 0:
                    return a
                return add(a, exp[log[b] + half])

        self.add, self.sub, self.neg, self.mul, self.inv = add, sub, neg, mul, inv

    def _setup_binary(self):
        k = self.k
        mod = sum(c << i for i, c in enumerate(self.modulus))
        top = 1 << k

        def add(a, b):
            return a ^ b

        def mul(a, b):
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= mod
            return r

        self.add = self.sub = add
        self.neg = lambda a: a
        self.mul = mul
        self.inv = self._inv_euclid

    def _setup_vector(self):
        self.add = lambda a, b: self._vec_add(a, b, 1)
        self.sub = lambda a, b: self._vec_add(a, b, -1)
        self.neg = lambda a: self._vec_add(0, a, -1)
        self.mul = self._packed_mul if self._setup_packed() else self._vec_mul
        self.inv = self._inv_euclid

    def _inv_by_pow(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d^%d)" % (self.p, self.k))
        return self.pow(a, self.q - 2)

    def _find_generator(self):
        n = self.q - 1
        primes = _prime_factors(n)
        for g in range(1, self.q):
            ok = True
            for r in primes:
                x, e, base = 1, n // r, g
                while e:
                    if e & 1:
                        x = self._vec_mul(x, base)
                    base = self._vec_mul(base, base)
                    e >>= 1
                if x == 1:
                    ok = False
                    break
            if ok:
                return g
        raise RuntimeError("no primitive element found")

    # -- element helpers -----------------------------------------------------------------

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        mul = self.mul
        while e:
            if e & 1:
                result = mul(result, a)
            e >>= 1
            if e:
                a = mul(a, a)
        return result

    def from_int(self, n: int) -> int:
        return n % self.p

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            if any(coeffs[self.k:]):
                raise FieldError(f"too many coefficients for GF({self.p}^{self.k})")
        out = 0
        p = self.p
        for c in reversed(coeffs[: self.k]):
            out = out * p + int(c) % p
        return out

    def _setup_digits(self):
        # digit vectors are read a chunk of base-p digits at a time
        p, k = self.p, self.k
        c = 1
        while c < k and p ** (c + 1) <= 4096:
            c += 1
        self._chunk, self._chunk_mod = c, p ** c
        table = []
        for n in range(p ** c):
            digits = []
            for _ in range(c):
                n, d = divmod(n, p)
                digits.append(d)
            table.append(digits)
        self._digit_table = table
        self._tail = [(j, m) for j, m in enumerate(self.modulus[:k]) if m] if self.modulus else []

    def coeffs(self, a: int) -> list[int]:
        out = []
        mod, table = self._chunk_mod, self._digit_table
        k = self.k
        while len(out) < k:
            a, r = divmod(a, mod)
            out.extend(table[r])
        del out[k:]
        return out

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random_element(self, rng) -> int:
        return rng.randrange(self.q)

    def elements(self):
        return range(self.q)

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_coeffs(value))
        return FieldElement(self, self.from_int(int(value)))

    def format(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        return "[" + ",".join(str(c) for c in self.coeffs(a)) + "]"

    def gen(self) -> int:
        """Encoding of the class of ``t``."""
        return self.p if self.k > 1 else 0

    @property
    def degree(self) -> int:
        return self.k

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}; {format_modulus(self.modulus)})"

    def __reduce__(self):
        return (GF, (self.p, self.k, self.modulus))


_FIELDS: dict = {}
_FIELDS_LOCK = threading.Lock()


def prime_field(p: int) -> FiniteField:
    return GF(p)


def GF(p: int, k: int = 1, modulus=None, seed: int = 0) -> FiniteField:
    """Shared field instance for GF(p^k).

    Without an explicit ``modulus`` the defining polynomial is
    ``random_irreducible(p, k, seed)``; with the default seed every caller
    gets the same canonical GF(p^k), which is what point comparisons across
    charts rely on.
    """
    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
        k = len(modulus) - 1
    elif k > 1:
        modulus = random_irreducible(p, k, seed)
    key = (p, modulus if k > 1 else None)
    with _FIELDS_LOCK:
        F = _FIELDS.get(key)
    if F is None:
        F = FiniteField(p, modulus if k > 1 else None)
        with _FIELDS_LOCK:
            F = _FIELDS.setdefault(key, F)
    return F


def extension(F: FiniteField, r: int) -> FiniteField:
    """Canonical GF(p^(k r)) containing ``F``."""
    if r == 1:
        return F
    return GF(F.p, F.k * r)


class FieldElement:
    """Value wrapper around an encoded element, with operator overloads."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("operands belong to different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def frobenius(self):
        return FieldElement(self.field, self.field.frobenius(self.value))

    def pth_root(self):
        return FieldElement(self.field, self.field.pth_root(self.value))

    @property
    def coeffs(self):
        return self.field.coeffs(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return self.field.format(self.value)


def frobenius(a: FieldElement) -> FieldElement:
    return a.frobenius()


def pth_root(a: FieldElement) -> FieldElement:
    return a.pth_root()


class Embedding:
    """A fixed ring map GF(p^k) -> GF(p^(k m)) sending ``t`` to a root of the modulus."""

    def __init__(self, source: FiniteField, target: FiniteField):
        if source.p != target.p or target.k % source.k:
            raise FieldError(f"no embedding {source!r} -> {target!r}")
        self.source, self.target = source, target
        if source.k == 1:
            self.root = None
            self._powers = [1]
        else:
            m = [target.from_int(c) for c in source.modulus]
            rts = upoly.roots(target, m)
            if not rts:
                raise AssertionError(f"modulus of {source!r} has no root in {target!r}")
            self.root = rts[0]
            self._powers = [target.pow(self.root, i) for i in range(source.k)]
        self._cache: dict[int, int] = {}

    def __call__(self, a: int) -> int:
        if self.source.k == 1:
            return a
        out = self._cache.get(a)
        if out is None:
            T = self.target
            out = 0
            for c, w in zip(self.source.coeffs(a), self._powers):
                if c:
                    out = T.add(out, T.mul(T.from_int(c), w))
            self._cache[a] = out
        return out


_EMBEDDINGS: dict = {}
_EMBED_LOCK = threading.Lock()


def embedding(source: FiniteField, target: FiniteField) -> Embedding:
    """The cached embedding for a field pair (the same root every time)."""
    key = (id(source), id(target))
    with _EMBED_LOCK:
        emb = _EMBEDDINGS.get(key)
        if emb is None:
            emb = Embedding(source, target)
            _EMBEDDINGS[key] = emb
    return emb


def embed(a: FieldElement, target: FiniteField) -> FieldElement:
    return FieldElement(target, embedding(a.field, target)(a.value))


# -- literals ---------------------------------------------------------------------------

_FIELD_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+))?\s*(?:;\s*([^)]*))?\)\s*$")


def format_modulus(m, var="t") -> str:
    terms = []
    for i in range(len(m) - 1, -1, -1):
        c = m[i]
        if not c:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mon:
            terms.append(str(c))
        elif c == 1:
            terms.append(mon)
        else:
            terms.append(f"{c}*{mon}")
    return " + ".join(terms) if terms else "0"


def _parse_modulus(text: str, p: int) -> tuple[int, ...]:
    coeffs: dict[int, int] = {}
    for raw in text.replace("-", "+-").split("+"):
        term = raw.replace(" ", "")
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        m = re.fullmatch(r"(?:(\d+)\*?)?(t(?:\^(\d+))?)?", term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise FieldError(f"bad modulus term {raw!r}")
        c = int(m.group(1)) if m.group(1) else 1
        e = 0 if m.group(2) is None else int(m.group(3) or 1)
        coeffs[e] = (coeffs.get(e, 0) + sign * c) % p
    deg = max(coeffs)
    return tuple(coeffs.get(i, 0) for i in range(deg + 1))


def parse_field(text: str) -> FiniteField:
    """Parse ``GF(3)``, ``GF(2^4)``, ``GF(2^4; t^4+t+1)`` or ``GF(9)``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise FieldError(f"bad field literal {text!r}")
    base = int(m.group(1))
    k = int(m.group(2)) if m.group(2) else 1
    if m.group(2) is None and not is_prime(base):
        ps = _prime_factors(base)
        if len(ps) != 1:
            raise FieldError(f"{base} is not a prime power")
        p = ps[0]
        k = 0
        while base > 1:
            base //= p
            k += 1
        base = p
    if not is_prime(base):
        raise FieldError(f"{base} is not prime")
    if k < 1:
        raise FieldError("extension degree must be at least 1")
    if m.group(3):
        mod = _parse_modulus(m.group(3), base)
        if len(mod) - 1 != k:
            raise FieldError("modulus degree does not match the field degree")
        return GF(base, modulus=mod)
    return GF(base, k)


def parse_element(F: FiniteField, text: str) -> int:
    text = text.strip()
    if text.startswith("["):
        try:
            digits = [int(c) for c in text.strip("[]").split(",")]
        except ValueError as exc:
            raise FieldError(f"bad element literal {text!r}") from exc
        if any(not 0 <= c < F.p for c in digits) or len(digits) > F.k:
            raise FieldError(f"element literal {text!r} is not a residue vector for {F!r}")
        return F.from_coeffs(digits)
    return F.from_int(int(text))
