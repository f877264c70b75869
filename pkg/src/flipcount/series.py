"""Exact rational functions and truncated power series in one variable t.

The zeta function and the generating function of a flip system come out
as rational functions with integer data; the flip zeta function itself
involves a square root and an exponential and is only expanded as a series.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import det_one_minus_t, diag_part, matmul, support_components


class BadConstantTerm(ValueError):
    pass


# -- polynomials: lists of Fractions, lowest degree first, no trailing zeros --


def _trim(p):
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_scale(a, c):
    return _trim([x * c for x in a])


def poly_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = a[:]
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] -= c * y
        r = _trim(r)
    return _trim(q), r


def poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return []
    return poly_scale(a, 1 / a[-1])


def poly_str(p, var: str = "t") -> str:
    p = _trim(p)
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            term = str(mag)
        elif i == 1:
            term = f"{mag}*{var}"
        else:
            term = f"{mag}*{var}^{i}"
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts)


def parse_poly(text: str, var: str = "t") -> list:
    """Inverse of ``poly_str``."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1].strip()
    if text == "0":
        return []
    coeffs: dict = {}
    sign = 1
    for token in text.replace("- ", "-").replace("+ ", "+").split():
        if token[0] in "+-":
            sign = -1 if token[0] == "-" else 1
            token = token[1:]
        if "*" in token:
            c, power = token.split("*")
            power = power[len(var):]
            k = int(power[1:]) if power.startswith("^") else 1
        else:
            c, k = token, 0
        coeffs[k] = coeffs.get(k, 0) + sign * Fraction(c)
        sign = 1
    return _trim([coeffs.get(i, 0) for i in range(max(coeffs) + 1)])


def parse_rational(text: str) -> RationalFunction:
    """Read the printed form ``(num) / (den)`` or ``(num)``."""
    num, sep, den = text.partition(") / (")
    if not sep:
        return RationalFunction(parse_poly(num))
    return RationalFunction(parse_poly(num + ")"), parse_poly("(" + den))


class RationalFunction:
    """``numerator / denominator`` in lowest terms, denominator(0) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence, den: Sequence = (1,)):
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den) if num else [Fraction(1)]
        if len(g) > 1:
            num = poly_divmod(num, g)[0]
            den = poly_divmod(den, g)[0]
        if not num:
            den = [Fraction(1)]
        # unit constant term when possible, otherwise monic
        scale = den[0] if den[0] != 0 else den[-1]
        self.num = tuple(poly_scale(num, 1 / scale))
        self.den = tuple(poly_scale(den, 1 / scale))

    @classmethod
    def poly(cls, coeffs) -> RationalFunction:
        return cls(coeffs, (1,))

    def __add__(self, other):
        other = _lift(other)
        return RationalFunction(
            poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
            poly_mul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction([-c for c in self.num], self.den)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        return RationalFunction(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunction(self.den, self.num) ** (-e)
        out = RationalFunction((1,))
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = _lift(other)
            except TypeError:
                return NotImplemented
        return poly_mul(self.num, other.den) == poly_mul(other.num, self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def compose_power(self, k: int) -> RationalFunction:
        """Substitute ``t -> t**k``."""

        def spread(p):
            out = [Fraction(0)] * (k * (len(p) - 1) + 1) if p else []
            for i, c in enumerate(p):
                out[k * i] = c
            return out

        return RationalFunction(spread(self.num), spread(self.den))

    def series(self, order: int) -> PowerSeries:
        if self.den[0] == 0:
            raise BadConstantTerm("denominator vanishes at t = 0")
        num = PowerSeries.from_poly(self.num, order)
        den = PowerSeries.from_poly(self.den, order)
        return num * den.reciprocal()

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if len(self.den) == 1 and self.den[0] == 1:
            return f"({poly_str(self.num)})"
        return f"({poly_str(self.num)}) / ({poly_str(self.den)})"


def _lift(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction((x,))
    raise TypeError(f"cannot treat {type(x).__name__} as a rational function")


T = RationalFunction((0, 1))


class PowerSeries:
    """Coefficients ``c_0 .. c_order``; everything beyond ``order`` is unknown."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_poly(cls, p, order: int) -> PowerSeries:
        return cls([p[i] if i < len(p) else 0 for i in range(order + 1)])

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def _match(self, other):
        if not isinstance(other, PowerSeries):
            other = PowerSeries.from_poly([Fraction(other)], self.order)
        n = min(self.order, other.order)
        return self.coeffs[: n + 1], other.coeffs[: n + 1], n

    def __add__(self, other):
        a, b, _ = self._match(other)
        return PowerSeries([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        a, b, _ = self._match(other)
        return PowerSeries([x - y for x, y in zip(a, b)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PowerSeries([c * other for c in self.coeffs])
        a, b, n = self._match(other)
        return PowerSeries([sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        a, b, _ = self._match(other)
        return a == b

    def __hash__(self):
        return hash(self.coeffs)

    def truncate(self, order: int) -> PowerSeries:
        return PowerSeries(self.coeffs[: order + 1])

    def reciprocal(self) -> PowerSeries:
        c = self.coeffs
        if c[0] == 0:
            raise BadConstantTerm("reciprocal needs a nonzero constant term")
        out = [1 / c[0]]
        for n in range(1, len(c)):
            out.append(-sum(c[k] * out[n - k] for k in range(1, n + 1)) / c[0])
        return PowerSeries(out)

    def derivative(self) -> PowerSeries:
        if self.order == 0:
            return PowerSeries([0])
        return PowerSeries([k * self.coeffs[k] for k in range(1, len(self.coeffs))])

    def exp(self) -> PowerSeries:
        s = self.coeffs
        if s[0] != 0:
            raise BadConstantTerm("exp needs a zero constant term")
        e = [Fraction(1)]
        for n in range(1, len(s)):
            e.append(Fraction(sum(k * s[k] * e[n - k] for k in range(1, n + 1))) / n)
        return PowerSeries(e)

    def log(self) -> PowerSeries:
        """Logarithm of a series with constant term 1."""
        f = self.coeffs
        if f[0] != 1:
            raise BadConstantTerm("log needs constant term 1")
        out = [Fraction(0)]
        for n in range(1, len(f)):
            acc = f[n] - Fraction(sum(k * out[k] * f[n - k] for k in range(1, n))) / n
            out.append(acc)
        return PowerSeries(out)

    def sqrt(self) -> PowerSeries:
        """Square root with constant term 1 of a series with constant term 1."""
        f = self.coeffs
        if f[0] != 1:
            raise BadConstantTerm("sqrt needs constant term 1")
        g = [Fraction(1)]
        for n in range(1, len(f)):
            g.append((f[n] - sum(g[k] * g[n - k] for k in range(1, n))) / 2)
        return PowerSeries(g)

    def compose_power(self, k: int) -> PowerSeries:
        """Substitute ``t -> t**k``, keeping the same order."""
        out = [Fraction(0)] * (self.order + 1)
        for i, c in enumerate(self.coeffs):
            if k * i > self.order:
                break
            out[k * i] = c
        return PowerSeries(out)

    def __repr__(self):
        return f"PowerSeries({[str(c) for c in self.coeffs]})"

    def as_lines(self) -> str:
        return "".join(f"{m}\t{c}\n" for m, c in enumerate(self.coeffs))


def log1p(s: PowerSeries) -> PowerSeries:
    """``log(1 + s)`` for ``s`` with zero constant term."""
    if s[0] != 0:
        raise BadConstantTerm("log(1+s) needs s(0) = 0")
    return (s + 1).log()


def sqrt1p(s: PowerSeries) -> PowerSeries:
    if s[0] != 0:
        raise BadConstantTerm("sqrt(1+s) needs s(0) = 0")
    return (s + 1).sqrt()


# -- closed forms from level matrices ------------------------------------------


def zeta_rational(levels) -> RationalFunction:
    """``exp(sum p_m t^m / m) = prod_k det(I - t A_k)^((-1)^k)``."""
    out = RationalFunction((1,))
    for lv in levels:
        if lv.size == 0:
            continue
        factor = RationalFunction(det_one_minus_t(lv.A))
        out = out / factor if lv.k % 2 else out * factor
    return out


def resolvent_form(u: np.ndarray, B: np.ndarray, v: np.ndarray) -> RationalFunction:
    """``sum_m (u^T B^m v) s^m`` as a rational function of s.

    Only states on some path from the support of u to the support of v
    matter; on that sub-matrix the denominator divides ``det(I - s B)`` and
    the numerator has degree below its size, so finitely many moments fix it.
    """
    n = B.shape[0]
    succ = [[j for j in range(n) if B[i, j]] for i in range(n)]
    pred = [[i for i in range(n) if B[i, j]] for j in range(n)]

    def closure(start, adj):
        seen = set(start)
        stack = list(start)
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return seen

    keep = sorted(
        closure([i for i in range(n) if u[i]], succ) & closure([i for i in range(n) if v[i]], pred)
    )
    if not keep:
        return RationalFunction(())
    Br = B[np.ix_(keep, keep)]
    ur = [int(u[i]) for i in keep]
    vec = np.array([v[i] for i in keep], dtype=object).reshape(-1, 1)
    den = det_one_minus_t(Br)
    size = len(keep)
    moments = []
    for _ in range(size):
        moments.append(sum(a * int(b) for a, b in zip(ur, vec.flat)))
        vec = matmul(Br, vec)
    num = poly_mul(den, moments)[:size]
    return RationalFunction(num, den)


def _diag_vector(m: np.ndarray) -> np.ndarray:
    return np.array([m[i, i] for i in range(m.shape[0])], dtype=object)


def generating_rational(levels) -> RationalFunction:
    """Closed form of ``sum_m p_{2m-1,0} t^(2m-1) + (p_{2m,0} + p_{2m,1})/2 t^(2m)``."""
    half = Fraction(1, 2)
    t = T
    t2 = T * T
    total = RationalFunction(())
    for lv in levels:
        if lv.size == 0:
            continue
        A, B, J = lv.A, lv.B, lv.J
        dj = _diag_vector(J)
        daj = _diag_vector(matmul(A, J))
        dja = _diag_vector(matmul(J, A))
        odd = resolvent_form(dj, B, daj).compose_power(2) * t
        even0 = resolvent_form(dj, B, matmul(B, dj.reshape(-1, 1)).flatten()).compose_power(2) * t2
        even1 = resolvent_form(dja, B, daj).compose_power(2) * t2
        term = odd + (even0 + even1) * half
        total = total + term if lv.k % 2 else total - term
    return total


def flip_zeta_series(zeta: RationalFunction, G: RationalFunction, order: int) -> PowerSeries:
    """``zeta(t^2)^(1/2) * exp(G(t))`` through ``t**order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    root = zeta.compose_power(2).series(order).sqrt()
    return root * G.series(order).exp()
