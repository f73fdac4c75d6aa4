"""Prime-power finite fields F_{p^k} in polynomial basis.

Elements have two interchangeable representations:

* ``FieldElement`` -- a small immutable object carrying its coefficient
  tuple (low-to-high) and the owning ``FieldDescriptor``; supports the
  usual operators.
* an integer *index* ``sum(c_i * p**i)`` -- used by the vectorised
  helpers (``vadd``, ``vmul`` ...) that operate on numpy arrays of indices.
  Index order is the canonical enumeration order of the field.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np
from sympy import factorint, isprime

MAX_ORDER = 2**63
# vectorised ops need p**2 * k to stay inside int64
_VECTOR_P_LIMIT = 2**28
# extension fields up to this order multiply through log/antilog tables
_LOG_TABLE_LIMIT = 2**24


class FieldError(ValueError):
    pass


# --- polynomial helpers over F_p (coefficient lists, low-to-high) ----------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = [c % p for c in a]
    a = _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a = _trim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(modulus, p):
    """Rabin's test for a monic polynomial over F_p (coefficients low-to-high)."""
    f = [c % p for c in modulus]
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**k, f, p), x, p):
        return False
    for r in factorint(k):
        h = _psub(_ppowmod(x, p ** (k // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def default_modulus(p, k):
    """Lexicographically least monic irreducible of degree k, reading c_0 first."""
    if k == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=k):
        if low[0] == 0:
            continue
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


# --- descriptor ------------------------------------------------------------

@dataclass(frozen=True)
class FieldDescriptor:
    p: int
    k: int
    modulus: tuple  # monic, low-to-high, length k + 1

    @property
    def q(self):
        return self.p**self.k

    @property
    def order(self):
        return self.q

    def __repr__(self):
        return f"F_{self.p}^{self.k}" if self.k > 1 else f"F_{self.p}"

    # construction of elements
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.from_int(int(value))

    def element(self, coeffs):
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.k:
            coeffs = _pmod(coeffs, self.modulus, self.p)
        coeffs = coeffs + [0] * (self.k - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def from_int(self, n):
        """Embed an integer through the prime field (n mod p)."""
        return self.element([n % self.p])

    def from_index(self, idx):
        return FieldElement(self, self.decode(idx))

    @property
    def zero(self):
        return self.element([0])

    @property
    def one(self):
        return self.element([1])

    @property
    def gen(self):
        """The class of t in F_p[t]/(modulus)."""
        return self.element([0, 1])

    def elements(self):
        for idx in range(self.q):
            yield self.from_index(idx)

    def __iter__(self):
        return self.elements()

    def __len__(self):
        return self.q

    # index encoding
    def encode(self, coeffs):
        idx = 0
        for c in reversed(coeffs):
            idx = idx * self.p + c
        return idx

    def decode(self, idx):
        out = []
        for _ in range(self.k):
            idx, r = divmod(idx, self.p)
            out.append(r)
        return tuple(out)

    # scalar arithmetic on coefficient tuples
    def _mul(self, a, b):
        prod = _pmul(_trim(a), _trim(b), self.p)
        r = _pmod(prod, self.modulus, self.p) if len(prod) > self.k else prod
        return tuple(r) + (0,) * (self.k - len(r))

    def _inv(self, a):
        if not any(a):
            raise ZeroDivisionError("division by zero in finite field")
        if self.k == 1:
            return (pow(a[0], -1, self.p),)
        return self._pow(a, self.q - 2)

    def _pow(self, a, e):
        if e < 0:
            a, e = self._inv(a), -e
        result = (1,) + (0,) * (self.k - 1)
        while e:
            if e & 1:
                result = self._mul(result, a)
            a = self._mul(a, a)
            e >>= 1
        return result

    # vectorised arithmetic on index arrays
    @cached_property
    def _powers(self):
        return self.p ** np.arange(self.k, dtype=np.int64)

    @cached_property
    def _reduction(self):
        # rows: t^(k+j) expressed in the basis 1..t^(k-1)
        rows = []
        for j in range(self.k - 1):
            c = [0] * (self.k + j) + [1]
            r = _pmod(c, self.modulus, self.p)
            rows.append(r + [0] * (self.k - len(r)))
        return np.array(rows, dtype=np.int64).reshape(self.k - 1, self.k)

    def _check_vector(self):
        if self.p >= _VECTOR_P_LIMIT:
            raise FieldError("vectorised arithmetic needs p < 2**28")

    def vdecode(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._powers) % self.p

    def vencode(self, digits):
        return (digits % self.p) @ self._powers

    def vadd(self, a, b):
        p = self.p
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (a + b) % p
        b = np.asarray(b, dtype=np.int64)
        # digit by digit, low digit first; no carries cross digits
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for pw in self._powers.tolist():
            out += ((a // pw + b // pw) % p) * pw
        return out

    def vneg(self, a):
        p = self.p
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % p
        out = np.zeros_like(a)
        for pw in self._powers.tolist():
            out += ((-(a // pw)) % p) * pw
        return out

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    @cached_property
    def _log_tables(self):
        """(log, exp) for a primitive element, or None when not worth it."""
        if self.k == 1 or self.q > _LOG_TABLE_LIMIT:
            return None
        m = self.q - 1
        primes = list(factorint(m))
        one = self.decode(1)
        g = next(g for g in range(self.p, self.q)
                 if all(self._pow(self.decode(g), m // r) != one for r in primes))
        exp = np.ones(1, dtype=np.int64)
        while len(exp) < m:  # doubling: g^(L..2L-1) = g^(0..L-1) * g^L
            step = self.encode(self._pow(self.decode(g), len(exp)))
            exp = np.concatenate([exp, self._vmul_poly(exp, step)])
        exp = exp[:m]
        log = np.zeros(self.q, dtype=np.int64)
        log[exp] = np.arange(m)
        return log, np.concatenate([exp, exp])

    def vmul(self, a, b):
        self._check_vector()
        p = self.p
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) * b) % p
        tables = self._log_tables
        if tables is not None:
            log, exp = tables
            a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
            out = exp[log[a] + log[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        return self._vmul_poly(a, b)

    def _vmul_poly(self, a, b):
        p = self.p
        da, db = np.broadcast_arrays(self.vdecode(a), self.vdecode(b))
        k = self.k
        prod = np.zeros(da.shape[:-1] + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            prod[..., i:i + k] += da[..., i:i + 1] * db
            prod[..., i:i + k] %= p
        low = prod[..., :k] + prod[..., k:] @ self._reduction
        return self.vencode(low % p)

    def vpow(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        tables = self._log_tables if self.k > 1 else None
        if tables is not None and e >= 0:
            log, exp = tables
            out = exp[(log[a] * (e % (self.q - 1))) % (self.q - 1)]
            return np.where(a == 0, 1 if e == 0 else 0, out)
        result = np.zeros_like(a) + 1
        while e:
            if e & 1:
                result = self.vmul(result, a)
            a = self.vmul(a, a)
            e >>= 1
        return result

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("division by zero in finite field")
        if self.k == 1:
            return np.array([pow(int(x), -1, self.p) for x in a.ravel()],
                            dtype=np.int64).reshape(a.shape)
        return self.vpow(a, self.q - 2)

    def all_indices(self):
        return np.arange(self.q, dtype=np.int64)

    @cached_property
    def quadratic_character(self):
        """Array chi with chi[x] in {0, 1, -1} for every index x (q odd)."""
        if self.q > 2**26:
            raise FieldError("character table too large")
        chi = np.full(self.q, -1, dtype=np.int8)
        chi[self.vmul(self.all_indices(), self.all_indices())] = 1
        chi[0] = 0
        return chi


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: FieldDescriptor
    coeffs: tuple = dc_field(default=())

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("arithmetic between elements of different fields")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field._mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        return FieldElement(self.field, self.field._inv(self.coeffs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        return FieldElement(self.field, self.field._pow(self.coeffs, int(e)))

    def frobenius(self, times=1):
        return self ** (self.field.p**times)

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __int__(self):
        return self.field.encode(self.coeffs)

    __index__ = __int__

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.coeffs == self.field.from_int(int(other)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.coeffs))

    def __lt__(self, other):
        return int(self) < int(other)

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                coef = str(c) if (c != 1 or i == 0) else ""
                terms.append(coef + ("*" if coef and mono else "") + mono)
        return " + ".join(reversed(terms)) or "0"


def make_field(p, k=1, modulus=None) -> FieldDescriptor:
    """Build F_{p^k}. A supplied modulus is checked for irreducibility."""
    p, k = int(p), int(k)
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if not isprime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if p**k > MAX_ORDER:
        raise FieldError(f"field order {p}^{k} exceeds the 2^63 cap")
    if modulus is None:
        modulus = default_modulus(p, k)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
    return FieldDescriptor(p, k, tuple(modulus))


def field_of_order(q) -> FieldDescriptor:
    fac = factorint(q)
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, k), = fac.items()
    return make_field(p, k)


def field_arithmetic(x: FieldElement, y: FieldElement | None, op: str) -> FieldElement:
    """Apply one of add/sub/mul/div/pow/frobenius; pow takes an int exponent as y."""
    if op == "frobenius":
        return x.frobenius()
    if op == "pow":
        return x ** int(y)
    if not isinstance(y, FieldElement) or x.field != y.field:
        raise FieldError("operands must come from the same field")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def subfield_membership(x: FieldElement, d: int) -> bool:
    k = x.field.k
    if d < 1 or k % d:
        raise FieldError(f"{d} does not divide the extension degree {k}")
    return x.frobenius(d) == x


def subfield_elements(F: FieldDescriptor, d: int) -> np.ndarray:
    """Indices of the subfield of order p^d, sorted."""
    if d < 1 or F.k % d:
        raise FieldError(f"{d} does not divide the extension degree {F.k}")
    idx = F.all_indices()
    return idx[F.vpow(idx, F.p**d) == idx]
