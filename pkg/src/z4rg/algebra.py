"""Coefficient arithmetic shared by every other module.

Three building blocks live here:

* :class:`ExactScalar` -- Gaussian rationals ``a + b i`` with ``a, b`` in Q.
* :class:`EpsSeries` -- power series in epsilon truncated at a fixed order.
* :class:`CouplingPoly` -- sparse polynomials in the three couplings
  ``(g1, g2, g3)``.

Series and polynomials accept either exact coefficients or plain Python
``complex`` numbers.  Mixing the two promotes to ``complex``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Complex, Rational
from typing import Callable, Iterable, Mapping, Sequence, Union

__all__ = [
    "ExactScalar",
    "EpsSeries",
    "CouplingPoly",
    "exact_arith",
    "exact_sqrt",
    "to_exact",
    "series_mul",
    "series_reciprocal",
    "poly_eval_series",
    "poly_partial",
    "G1",
    "G2",
    "G3",
]


@dataclass(frozen=True)
class ExactScalar:
    """Gaussian rational ``re + im*i`` with arbitrary precision parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __init__(self, re=0, im=0):
        if isinstance(re, ExactScalar):
            if im:
                raise TypeError("cannot combine ExactScalar with an extra imaginary part")
            re, im = re.re, re.im
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    # canonical-form accessors (Fraction keeps lowest terms, positive denominator)
    @property
    def re_num(self) -> int:
        return self.re.numerator

    @property
    def re_den(self) -> int:
        return self.re.denominator

    @property
    def im_num(self) -> int:
        return self.im.numerator

    @property
    def im_den(self) -> int:
        return self.im.denominator

    @classmethod
    def parse(cls, text: str) -> "ExactScalar":
        """Parse ``"p/q"`` or a decimal string into a real exact value."""
        return cls(Fraction(text.strip()))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.re, -self.im)

    def __pos__(self) -> "ExactScalar":
        return self

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return complex(self) + other if isinstance(other, Complex) else NotImplemented
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return complex(self) - other if isinstance(other, Complex) else NotImplemented
        return ExactScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return other - complex(self) if isinstance(other, Complex) else NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return complex(self) * other if isinstance(other, Complex) else NotImplemented
        return ExactScalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return complex(self) / other if isinstance(other, Complex) else NotImplemented
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        num = self * o.conjugate()
        return ExactScalar(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return other / complex(self) if isinstance(other, Complex) else NotImplemented
        return o / self

    def __pow__(self, n: int) -> "ExactScalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ExactScalar(1) / (self ** -n)
        out, base = ExactScalar(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactScalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.im == 0 and self.re == other
        if isinstance(other, Complex):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return _frac_str(self.re)
        if self.re == 0:
            return f"{_frac_str(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{_frac_str(self.re)}{sign}{_frac_str(abs(self.im))}i"

    def __repr__(self) -> str:
        return f"ExactScalar({self})"


Scalar = Union[ExactScalar, complex]


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coerce(x) -> ExactScalar | None:
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ExactScalar(x)
    if isinstance(x, bool):
        return ExactScalar(int(x))
    return None


def to_exact(x) -> ExactScalar | None:
    """Return ``x`` as an :class:`ExactScalar`, or ``None`` for floating input."""
    return _coerce(x)


def exact_arith(a: ExactScalar, b: ExactScalar, op: str) -> ExactScalar:
    """Exact field arithmetic; ``op`` is one of add, sub, mul, div."""
    table: dict[str, Callable] = {
        "add": ExactScalar.__add__,
        "sub": ExactScalar.__sub__,
        "mul": ExactScalar.__mul__,
        "div": ExactScalar.__truediv__,
    }
    try:
        fn = table[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(ExactScalar(a), ExactScalar(b))


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def exact_sqrt(x: ExactScalar) -> ExactScalar | None:
    """Principal square root when it is again a Gaussian rational.

    Only real arguments are handled: a non-negative rational square gives a
    real root, a negative one gives ``i*sqrt(-x)`` (matching ``cmath.sqrt``).
    Returns ``None`` otherwise.
    """
    x = ExactScalar(x)
    if x.im != 0:
        return None
    if x.re >= 0:
        r = _rational_sqrt(x.re)
        return None if r is None else ExactScalar(r)
    r = _rational_sqrt(-x.re)
    return None if r is None else ExactScalar(0, r)


def _normalize(c):
    """Map a coefficient onto one of the two backends."""
    e = _coerce(c)
    if e is not None:
        return e
    if isinstance(c, Complex):
        return complex(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _is_zero(c) -> bool:
    return c == 0


class EpsSeries:
    """Truncated power series ``sum_m c_m eps**m`` for ``m <= order``.

    Coefficients are either all :class:`ExactScalar` (``kind == "exact"``) or
    all ``complex`` (``kind == "numeric"``).

    >>> e = EpsSeries.eps(2)
    >>> (1 + e) * (1 - e)
    EpsSeries([1, 0, -1])
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Sequence, order: int | None = None):
        cs = [_normalize(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = cs[: order + 1]
        if any(isinstance(c, complex) for c in cs):
            cs = [complex(c) for c in cs]
            pad = 0j
        else:
            pad = ExactScalar(0)
        cs += [pad] * (order + 1 - len(cs))
        self._coeffs = tuple(cs)

    # construction helpers
    @classmethod
    def const(cls, c, order: int = 2) -> "EpsSeries":
        return cls([c], order)

    @classmethod
    def eps(cls, order: int = 2) -> "EpsSeries":
        return cls([0, 1], order)

    @classmethod
    def zero(cls, order: int = 2) -> "EpsSeries":
        return cls([0], order)

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def kind(self) -> str:
        return "numeric" if isinstance(self._coeffs[0], complex) else "exact"

    def __getitem__(self, m: int):
        return self._coeffs[m]

    def __len__(self) -> int:
        return len(self._coeffs)

    def to_numeric(self) -> "EpsSeries":
        return EpsSeries([complex(c) for c in self._coeffs])

    def with_order(self, order: int) -> "EpsSeries":
        """Truncate or zero-pad to a new order."""
        return EpsSeries(self._coeffs, order)

    def conjugate(self) -> "EpsSeries":
        return EpsSeries([c.conjugate() for c in self._coeffs])

    def map(self, fn: Callable) -> "EpsSeries":
        return EpsSeries([fn(c) for c in self._coeffs])

    def evaluate(self, eps) -> complex | ExactScalar:
        """Horner evaluation at a concrete epsilon."""
        acc = self._coeffs[-1]
        for c in reversed(self._coeffs[:-1]):
            acc = acc * eps + c
        return acc

    def leading(self, tol: float = 0.0) -> tuple[int, object] | None:
        """Index and value of the first coefficient with ``|c| > tol``."""
        for m, c in enumerate(self._coeffs):
            if abs(complex(c)) > tol:
                return m, c
        return None

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return all(_is_zero(c) for c in self._coeffs)
        return all(abs(complex(c)) <= tol for c in self._coeffs)

    def max_imag(self) -> float:
        return max(abs(complex(c).imag) for c in self._coeffs)

    def shift(self, m: int) -> "EpsSeries":
        """Multiply by ``eps**m`` (``m >= 0``)."""
        zero = self._coeffs[0] * 0
        return EpsSeries([zero] * m + list(self._coeffs), self.order)

    def _check(self, other: "EpsSeries") -> None:
        if other.order != self.order:
            raise ValueError(f"series orders differ: {self.order} vs {other.order}")

    def __neg__(self) -> "EpsSeries":
        return EpsSeries([-c for c in self._coeffs])

    def __add__(self, other):
        if isinstance(other, EpsSeries):
            self._check(other)
            return EpsSeries([a + b for a, b in zip(self._coeffs, other._coeffs)])
        if isinstance(other, (Complex, ExactScalar)):
            cs = list(self._coeffs)
            cs[0] = cs[0] + _normalize(other)
            return EpsSeries(cs)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (EpsSeries, Complex, ExactScalar)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, EpsSeries):
            return series_mul(self, other)
        if isinstance(other, (Complex, ExactScalar)):
            o = _normalize(other)
            return EpsSeries([c * o for c in self._coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, EpsSeries):
            return self * series_reciprocal(other)
        if isinstance(other, (Complex, ExactScalar)):
            o = _normalize(other)
            return EpsSeries([c / o for c in self._coeffs])
        return NotImplemented

    def __rtruediv__(self, other):
        return series_reciprocal(self) * other

    def __pow__(self, n: int) -> "EpsSeries":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = EpsSeries.const(1, self.order)
        if self.kind == "numeric":
            out = out.to_numeric()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, EpsSeries):
            return self.order == other.order and all(
                a == b for a, b in zip(self._coeffs, other._coeffs)
            )
        if isinstance(other, (Complex, ExactScalar)):
            return self == EpsSeries.const(other, self.order)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def allclose(self, other: "EpsSeries", tol: float = 1e-12) -> bool:
        self._check(other)
        return all(abs(complex(a) - complex(b)) <= tol for a, b in zip(self._coeffs, other._coeffs))

    def __repr__(self) -> str:
        return f"EpsSeries([{', '.join(str(c) for c in self._coeffs)}])"

    def __str__(self) -> str:
        parts = []
        for m, c in enumerate(self._coeffs):
            if _is_zero(c):
                continue
            mono = "" if m == 0 else ("eps" if m == 1 else f"eps^{m}")
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) if parts else "0"


def series_mul(s: EpsSeries, t: EpsSeries) -> EpsSeries:
    """Cauchy product truncated at the shared order."""
    s._check(t)
    n = s.order
    a, b = s.coeffs, t.coeffs
    out = []
    for m in range(n + 1):
        acc = a[0] * b[m]
        for j in range(1, m + 1):
            acc = acc + a[j] * b[m - j]
        out.append(acc)
    return EpsSeries(out)


def series_reciprocal(s: EpsSeries) -> EpsSeries:
    """Series ``r`` with ``s * r == 1`` through the truncation order."""
    a = s.coeffs
    if _is_zero(a[0]):
        raise ZeroDivisionError("series has zero constant term (pole at eps = 0)")
    r = [1 / a[0]]
    for m in range(1, s.order + 1):
        acc = a[1] * r[m - 1]
        for j in range(2, m + 1):
            acc = acc + a[j] * r[m - j]
        r.append(-acc / a[0])
    return EpsSeries(r)


Exponents = tuple[int, int, int]


class CouplingPoly:
    """Sparse polynomial in the couplings ``(g1, g2, g3)``.

    Stored as ``{(e1, e2, e3): coeff}`` with zero coefficients dropped, so
    structural equality is polynomial equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponents, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponents, object] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != 3 or min(exps) < 0:
                raise ValueError(f"bad exponent triple {exps}")
            c = _normalize(c)
            acc[exps] = acc[exps] + c if exps in acc else c
        self._terms = {e: c for e, c in sorted(acc.items()) if not _is_zero(c)}

    @classmethod
    def const(cls, c) -> "CouplingPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, index: int) -> "CouplingPoly":
        """The coupling ``g_index`` for ``index`` in 1..3."""
        if index not in (1, 2, 3):
            raise ValueError("variable index must be 1, 2 or 3")
        e = [0, 0, 0]
        e[index - 1] = 1
        return cls({tuple(e): 1})

    @property
    def terms(self) -> dict[Exponents, object]:
        return dict(self._terms)

    def coeff(self, exps: Exponents):
        return self._terms.get(tuple(exps), ExactScalar(0))

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def homogeneous(self, deg: int) -> "CouplingPoly":
        return CouplingPoly({e: c for e, c in self._terms.items() if sum(e) == deg})

    def is_zero(self) -> bool:
        return not self._terms

    def __iter__(self):
        return iter(self._terms.items())

    def __neg__(self) -> "CouplingPoly":
        return CouplingPoly({e: -c for e, c in self._terms.items()})

    def __add__(self, other):
        if isinstance(other, (Complex, ExactScalar)):
            other = CouplingPoly.const(other)
        if not isinstance(other, CouplingPoly):
            return NotImplemented
        return CouplingPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (Complex, ExactScalar)):
            other = CouplingPoly.const(other)
        if not isinstance(other, CouplingPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Complex, ExactScalar)):
            o = _normalize(other)
            return CouplingPoly({e: c * o for e, c in self._terms.items()})
        if not isinstance(other, CouplingPoly):
            return NotImplemented
        out = []
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                out.append(((ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]), ca * cb))
        return CouplingPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CouplingPoly":
        out = CouplingPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (Complex, ExactScalar)):
            other = CouplingPoly.const(other)
        if not isinstance(other, CouplingPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def partial(self, var: int) -> "CouplingPoly":
        return poly_partial(self, var)

    def div_monomial(self, exps: Exponents) -> "CouplingPoly":
        """Exact division by ``g1**e1 g2**e2 g3**e3``; raises if not divisible."""
        out = {}
        for e, c in self._terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if min(q) < 0:
                raise ArithmeticError(f"term with exponents {e} not divisible by {tuple(exps)}")
            out[q] = c
        return CouplingPoly(out)

    def substitute_g3(self, k) -> "CouplingPoly":
        """Replace ``g3`` by ``k*g2`` (restriction to a plane of fixed k)."""
        k = _normalize(k)
        out = []
        for (e1, e2, e3), c in self._terms.items():
            out.append(((e1, e2 + e3, 0), c * k**e3))
        return CouplingPoly(out)

    def __call__(self, g1, g2, g3):
        """Numeric evaluation; arguments may be scalars or numpy arrays."""
        exact = _all_exact((g1, g2, g3))
        acc = ExactScalar(0) if exact else 0j
        for (e1, e2, e3), c in self._terms.items():
            if not exact:
                c = complex(c)
            acc = acc + c * g1**e1 * g2**e2 * g3**e3
        return acc

    def eval_series(self, g: Sequence[EpsSeries]) -> EpsSeries:
        return poly_eval_series(self, g)

    def __repr__(self) -> str:
        return f"CouplingPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(
                (f"g{i + 1}" if p == 1 else f"g{i + 1}^{p}") for i, p in enumerate(e) if p
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _all_exact(values) -> bool:
    return all(_coerce(v) is not None for v in values)


G1 = CouplingPoly.var(1)
G2 = CouplingPoly.var(2)
G3 = CouplingPoly.var(3)


def poly_partial(p: CouplingPoly, var: int) -> CouplingPoly:
    """Formal partial derivative with respect to ``g_var``."""
    if var not in (1, 2, 3):
        raise ValueError("variable index must be 1, 2 or 3")
    i = var - 1
    out = []
    for e, c in p.terms.items():
        if e[i] == 0:
            continue
        de = list(e)
        de[i] -= 1
        out.append((tuple(de), c * e[i]))
    return CouplingPoly(out)


def poly_eval_series(p: CouplingPoly, g: Sequence[EpsSeries]) -> EpsSeries:
    """Substitute one series per coupling, truncating every product."""
    if len(g) != 3:
        raise ValueError("need exactly three series")
    order = g[0].order
    for s in g[1:]:
        if s.order != order:
            raise ValueError("coupling series must share the truncation order")
    numeric = any(s.kind == "numeric" for s in g)
    zero = EpsSeries.zero(order)
    one = EpsSeries.const(1, order)
    if numeric:
        zero, one = zero.to_numeric(), one.to_numeric()
    powers: list[list[EpsSeries]] = []
    for i in range(3):
        deg = max((e[i] for e in p.terms), default=0)
        row = [one]
        for _ in range(deg):
            row.append(row[-1] * g[i])
        powers.append(row)
    acc = zero
    for (e1, e2, e3), c in p.terms.items():
        acc = acc + powers[0][e1] * powers[1][e2] * powers[2][e3] * c
    return acc


def principal_sqrt(x) -> ExactScalar | complex:
    """Exact principal root when available, otherwise ``cmath.sqrt``."""
    e = _coerce(x)
    if e is not None:
        r = exact_sqrt(e)
        if r is not None:
            return r
        return cmath.sqrt(complex(e))
    return cmath.sqrt(complex(x))
