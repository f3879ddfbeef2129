"""Truncated multivariate Taylor arithmetic (jets).

A jet of order K in n variables stores the normalized Taylor coefficients

    coeff(mu) = (d^mu F)(p) / mu!          for every multi-index |mu| <= K

of a smooth function F about an expansion point p.  Sums, products,
quotients and compositions of jets are exact Taylor arithmetic with all
terms of total degree above K dropped, so a single evaluation of a
function over seeded variable jets yields every partial derivative of the
result up to order K at machine precision.

The default order is 4: third derivatives of metric entries are needed to
differentiate a tension field twice, and one extra order is kept as
margin for diagnostics.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import product as _iproduct

import numpy as np

from .errors import DomainError

DEFAULT_ORDER = 4

MultiIndex = tuple


def _monomials(nvars, order):
    """All exponent tuples with |mu| <= order, graded (degree-major) order."""
    out = []
    for deg in range(order + 1):
        out.extend(m for m in _iproduct(range(deg + 1), repeat=nvars)
                   if sum(m) == deg)
    return tuple(out)


class JetSpace:
    """Shared coefficient layout and cached index tables for one (nvars, order)."""

    def __init__(self, nvars, order):
        if nvars < 1:
            raise ValueError("jet space needs at least one variable")
        if order < 1:
            raise ValueError("jet order must be at least 1")
        self.nvars = nvars
        self.order = order
        self.monomials = _monomials(nvars, order)
        self.size = len(self.monomials)
        self.index = {m: i for i, m in enumerate(self.monomials)}
        self.degrees = np.array([sum(m) for m in self.monomials])
        self._mul_table = None
        self._diff_tables = {}

    def mul_table(self):
        """COO-style (ia, ib, iout) index arrays for the truncated Cauchy product."""
        if self._mul_table is None:
            ia, ib, iout = [], [], []
            for i, ma in enumerate(self.monomials):
                da = sum(ma)
                for j, mb in enumerate(self.monomials):
                    if da + sum(mb) > self.order:
                        continue
                    ia.append(i)
                    ib.append(j)
                    iout.append(self.index[tuple(a + b for a, b in zip(ma, mb))])
            self._mul_table = (np.array(ia), np.array(ib), np.array(iout))
        return self._mul_table

    def diff_table(self, k):
        """(isrc, idst, factor) arrays realizing d/dx_k as a coefficient shift."""
        if k not in self._diff_tables:
            lower = jet_space(self.nvars, self.order - 1) if self.order > 1 else None
            isrc, idst, fac = [], [], []
            for i, m in enumerate(self.monomials):
                if m[k] == 0:
                    continue
                tgt = tuple(e - 1 if a == k else e for a, e in enumerate(m))
                if lower is None:
                    if sum(tgt) > 0:
                        continue
                    j = 0
                else:
                    if sum(tgt) > lower.order:
                        continue
                    j = lower.index[tgt]
                isrc.append(i)
                idst.append(j)
                fac.append(m[k])
            self._diff_tables[k] = (np.array(isrc), np.array(idst),
                                    np.array(fac, dtype=float))
        return self._diff_tables[k]


@lru_cache(maxsize=None)
def jet_space(nvars, order):
    return JetSpace(nvars, order)


class Jet:
    """One truncated Taylor expansion; immutable by convention."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space, coeffs):
        self.space = space
        self.coeffs = coeffs

    # -- construction ------------------------------------------------------

    @staticmethod
    def constant(v, nvars, order):
        sp = jet_space(nvars, order)
        c = np.zeros(sp.size)
        c[0] = v
        return Jet(sp, c)

    # -- inspection --------------------------------------------------------

    @property
    def value(self):
        return float(self.coeffs[0])

    def coeff(self, mu):
        mu = tuple(mu)
        idx = self.space.index.get(mu)
        if idx is None:
            raise KeyError(f"multi-index {mu} outside order-{self.space.order} jet")
        return float(self.coeffs[idx])

    def partial(self, mu):
        """d^mu F at the expansion point: mu! times the stored coefficient."""
        fact = 1.0
        for e in mu:
            fact *= math.factorial(e)
        return fact * self.coeff(mu)

    def gradient(self):
        """First partials as a vector."""
        n = self.space.nvars
        return np.array([self.coeffs[self.space.index[tuple(
            1 if j == i else 0 for j in range(n))]] for i in range(n)])

    def is_variable_seed(self, i):
        nz = np.nonzero(self.coeffs)[0]
        lin = self.space.index[tuple(1 if j == i else 0
                                     for j in range(self.space.nvars))]
        ok = set(nz) <= {0, lin}
        return ok and abs(self.coeffs[lin] - 1.0) < 1e-15

    # -- structural ops ----------------------------------------------------

    def diff(self, k):
        """The jet of dF/dx_k, one order lower (order floor at 1)."""
        sp = self.space
        isrc, idst, fac = sp.diff_table(k)
        lower = jet_space(sp.nvars, sp.order - 1) if sp.order > 1 else jet_space(sp.nvars, 1)
        out = np.zeros(lower.size)
        if sp.order == 1:
            # only the constant coefficient of the derivative survives
            np.add.at(out, idst, self.coeffs[isrc] * fac)
            out[1:] = 0.0
            return Jet(lower, out)
        np.add.at(out, idst, self.coeffs[isrc] * fac)
        return Jet(lower, out)

    def truncate(self, order):
        """Drop coefficients above the given order (jets are never mutated,
        so the sliced view is safe to share)."""
        if order == self.space.order:
            return self
        if order > self.space.order:
            raise ValueError("cannot extend a jet to higher order")
        sp = jet_space(self.space.nvars, order)
        return Jet(sp, self.coeffs[:sp.size])

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        """Bring self/other to a common space; scalars pass through as floats."""
        if isinstance(other, Jet):
            if other.space is self.space:
                return self, other
            if other.space.nvars != self.space.nvars:
                raise ValueError("jets over different variable counts")
            k = min(self.space.order, other.space.order)
            return self.truncate(k), other.truncate(k)
        return self, float(other)

    def __add__(self, other):
        a, b = self._coerce(other)
        if isinstance(b, Jet):
            return Jet(a.space, a.coeffs + b.coeffs)
        c = a.coeffs.copy()
        c[0] += b
        return Jet(a.space, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -float(other))

    def __rsub__(self, other):
        return (-self) + float(other)

    def __mul__(self, other):
        a, b = self._coerce(other)
        if not isinstance(b, Jet):
            return Jet(a.space, a.coeffs * b)
        ia, ib, iout = a.space.mul_table()
        out = np.bincount(iout, weights=a.coeffs[ia] * b.coeffs[ib],
                          minlength=a.space.size)
        return Jet(a.space, out)

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.value
        if v == 0.0:
            raise DomainError("division by a zero-valued jet")
        w = self - v            # zero constant term
        out = Jet.constant((-1.0) ** self.space.order / v ** (self.space.order + 1),
                           self.space.nvars, self.space.order)
        for k in range(self.space.order - 1, -1, -1):
            out = out * w + (-1.0) ** k / v ** (k + 1)
        return out

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if isinstance(b, Jet):
            return a * b.reciprocal()
        if b == 0.0:
            raise DomainError("division by zero")
        return Jet(a.space, a.coeffs / b)

    def __rtruediv__(self, other):
        return self.reciprocal() * float(other)

    def __pow__(self, e):
        if isinstance(e, Jet):
            if np.count_nonzero(e.coeffs[1:]) == 0:
                e = e.value
            else:
                return jet_apply("exp", e * jet_apply("ln", self))
        e = float(e)
        if e.is_integer():
            return self._int_pow(int(e))
        return jet_apply("pow", self, e)

    def _int_pow(self, n):
        if n == 0:
            return Jet.constant(1.0, self.space.nvars, self.space.order)
        base = self if n > 0 else self.reciprocal()
        result = None
        b, k = base, abs(n)
        while k:
            if k & 1:
                result = b if result is None else result * b
            k >>= 1
            if k:
                b = b * b
        return result

    def __repr__(self):
        return (f"Jet(nvars={self.space.nvars}, order={self.space.order}, "
                f"value={self.value:.6g})")


# ---------------------------------------------------------------------------
# Primitive operations matching the engine's public contract.
# ---------------------------------------------------------------------------

def jet_var(i, v, nvars, order=DEFAULT_ORDER):
    """Seeded variable jet: value v, unit first coefficient in slot i."""
    if not 0 <= i < nvars:
        raise IndexError(f"variable index {i} out of range for {nvars} variables")
    sp = jet_space(nvars, order)
    c = np.zeros(sp.size)
    c[0] = v
    c[sp.index[tuple(1 if j == i else 0 for j in range(nvars))]] = 1.0
    return Jet(sp, c)


def seed_point(point, order=DEFAULT_ORDER):
    """Variable jets for every coordinate of a point."""
    point = np.asarray(point, dtype=float)
    n = point.shape[0]
    return [jet_var(i, point[i], n, order) for i in range(n)]


def jet_combine(op, a, b):
    """Binary arithmetic on jets: op in {add, sub, mul, div, pow}."""
    ops = {"add": lambda x, y: x + y, "sub": lambda x, y: x - y,
           "mul": lambda x, y: x * y, "div": lambda x, y: x / y,
           "pow": lambda x, y: x ** y}
    if op not in ops:
        raise ValueError(f"unknown jet operation {op!r}")
    return ops[op](a, b)


def _series_coefficients(name, v, order, r=None):
    """Taylor coefficients f^(k)(v)/k! of an elementary function, k = 0..order."""
    ks = np.arange(order + 1)
    if name == "exp":
        return math.exp(v) / np.array([math.factorial(k) for k in ks])
    if name == "ln":
        if v <= 0.0:
            raise DomainError(f"ln of non-positive value {v}")
        c = np.empty(order + 1)
        c[0] = math.log(v)
        for k in range(1, order + 1):
            c[k] = (-1.0) ** (k - 1) / (k * v ** k)
        return c
    if name == "sqrt":
        if v <= 0.0:
            raise DomainError(f"sqrt of non-positive value {v}")
        return _series_coefficients("pow", v, order, r=0.5)
    if name in ("sin", "cos"):
        s, c = math.sin(v), math.cos(v)
        cycle = (s, c, -s, -c) if name == "sin" else (c, -s, -c, s)
        return np.array([cycle[k % 4] / math.factorial(k) for k in ks])
    if name == "pow":
        if r is None:
            raise ValueError("pow requires an exponent")
        if v <= 0.0:
            raise DomainError(f"fractional power of non-positive base {v}")
        c = np.empty(order + 1)
        binom = 1.0
        for k in range(order + 1):
            c[k] = binom * v ** (r - k)
            binom *= (r - k) / (k + 1)
        return c
    raise ValueError(f"unknown elementary function {name!r}")


def jet_apply(name, a, r=None):
    """Compose an elementary function's Taylor series with a jet."""
    if not isinstance(a, Jet):
        raise TypeError("jet_apply expects a jet argument")
    order = a.space.order
    c = _series_coefficients(name, a.value, order, r=r)
    w = a - a.value
    out = Jet.constant(c[order], a.space.nvars, order)
    for k in range(order - 1, -1, -1):
        out = out * w + c[k]
    return out


def jet_compose(f, args):
    """Substitute jets into a jet: Taylor expansion of F(args(.)).

    ``f`` is a jet in n variables expanded about q; ``args`` are n jets in
    a common space whose values equal q.  The result is the jet of the
    composite in the args' space.
    """
    if len(args) != f.space.nvars:
        raise ValueError("argument count does not match the outer jet's variables")
    inner = args[0].space
    for a in args[1:]:
        if a.space is not inner:
            a_sp = a.space
            if a_sp.nvars != inner.nvars or a_sp.order != inner.order:
                raise ValueError("composition arguments must share one jet space")
    w = [a - a.value for a in args]
    cache = {tuple([0] * f.space.nvars): Jet.constant(1.0, inner.nvars, inner.order)}

    def monomial_jet(mu):
        got = cache.get(mu)
        if got is not None:
            return got
        k = next(i for i, e in enumerate(mu) if e > 0)
        prev = tuple(e - 1 if i == k else e for i, e in enumerate(mu))
        val = monomial_jet(prev) * w[k]
        cache[mu] = val
        return val

    out = Jet.constant(0.0, inner.nvars, inner.order)
    for i, mu in enumerate(f.space.monomials):
        if sum(mu) > inner.order:
            continue
        c = f.coeffs[i]
        if c != 0.0:
            out = out + monomial_jet(mu) * c
    return out
