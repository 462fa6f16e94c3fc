"""Exact scalar field: rational functions over the integers in lam, mu, nu, t.

Every scalar is stored reduced: gcd(num, den) = 1 including integer content,
and the denominator's leading deglex coefficient is positive.  Equality and
hashing are therefore structural.
"""

from __future__ import annotations

from fractions import Fraction

from . import _kernel as K

VAR_NAMES = ("lam", "mu", "nu", "t")
VAR_INDEX = {name: i for i, name in enumerate(VAR_NAMES)}

_ONE_P = {K.ZERO_EXP: 1}


class ScalarError(ArithmeticError):
    pass


def _poly_const(c: int) -> dict:
    return {K.ZERO_EXP: c} if c else {}


def _poly_var(name: str, power: int = 1) -> dict:
    i = VAR_INDEX[name]
    exp = tuple(power if j == i else 0 for j in range(K.NVARS))
    return {exp: 1}


class SpectralScalar:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: dict, den: dict, reduced: bool = False):
        if not den:
            raise ScalarError("zero denominator")
        if not reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(c: int) -> "SpectralScalar":
        return SpectralScalar(_poly_const(c), _ONE_P, reduced=True)

    @staticmethod
    def from_fraction(f) -> "SpectralScalar":
        f = Fraction(f)
        return SpectralScalar(_poly_const(f.numerator), _poly_const(f.denominator), reduced=True)

    @staticmethod
    def var(name: str, power: int = 1) -> "SpectralScalar":
        if power >= 0:
            return SpectralScalar(_poly_var(name, power), _ONE_P, reduced=True)
        return SpectralScalar(_ONE_P, _poly_var(name, -power), reduced=True)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == _ONE_P and self.den == _ONE_P

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return SpectralScalar(K.p_add(self.num, other.num), self.den)
        num = K.p_add(K.p_mul(self.num, other.den), K.p_mul(other.num, self.den))
        return SpectralScalar(num, K.p_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return SpectralScalar(K.p_neg(self.num), self.den, reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        return SpectralScalar(K.p_mul(self.num, other.num), K.p_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ScalarError("division by zero scalar")
        return SpectralScalar(K.p_mul(self.num, other.den), K.p_mul(self.den, other.num))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return (ONE / self) ** (-k)
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    # -- structure ---------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (frozenset(self.num.items()), frozenset(self.den.items()))
            )
        return self._hash

    def cross_equals(self, other: "SpectralScalar") -> bool:
        """Equality by cross-multiplication; oracle for the canonical form."""
        return K.p_mul(self.num, other.den) == K.p_mul(other.num, self.den)

    def substitute(self, mapping) -> "SpectralScalar":
        """Simultaneously rename variables, e.g. {"lam": "mu"}.

        Raises if the substitution collapses the denominator to zero.
        """
        remap = {VAR_INDEX[a]: VAR_INDEX[b] for a, b in mapping.items()}
        return SpectralScalar(_remap(self.num, remap), _remap(self.den, remap))

    def degree_in(self, name: str) -> int:
        i = VAR_INDEX[name]
        d = max((e[i] for e in self.num), default=0)
        return d

    def decompose_by_var(self, name: str) -> dict:
        """Split a Laurent-polynomial-in-`name` scalar by its `name`-degree.

        The denominator may contain `name` only as a monomial factor.
        """
        i = VAR_INDEX[name]
        if not self.num:
            return {}
        dmin = min(e[i] for e in self.den)
        rest = {e[:i] + (e[i] - dmin,) + e[i + 1 :]: c for e, c in self.den.items()}
        if any(e[i] for e in rest):
            raise ScalarError(f"denominator is not monomial in {name}")
        out: dict = {}
        for e, c in self.num.items():
            d = e[i] - dmin
            stripped = e[:i] + (0,) + e[i + 1 :]
            part = out.setdefault(d, {})
            part[stripped] = part.get(stripped, 0) + c
        return {
            d: SpectralScalar({e: c for e, c in part.items() if c}, rest)
            for d, part in out.items()
            if any(part.values())
        }

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        return scalar_to_str(self)

    def __repr__(self):
        return f"SpectralScalar({scalar_to_str(self)})"


def _reduce(num: dict, den: dict):
    if not num:
        return {}, dict(_ONE_P)
    if den == _ONE_P:
        return num, den
    g = K.p_gcd(num, den)
    if g != _ONE_P:
        num = K.p_divexact(num, g)
        den = K.p_divexact(den, g)
    if K.p_lead(den)[1] < 0:
        num, den = K.p_neg(num), K.p_neg(den)
    return num, den


def _remap(p: dict, remap: dict) -> dict:
    out: dict = {}
    for e, c in p.items():
        ne = [0] * K.NVARS
        for i, d in enumerate(e):
            ne[remap.get(i, i)] += d
        key = tuple(ne)
        s = out.get(key, 0) + c
        if s:
            out[key] = s
        else:
            del out[key]
    return out


def _coerce(x):
    if isinstance(x, SpectralScalar):
        return x
    if isinstance(x, int):
        return SpectralScalar.from_int(x)
    if isinstance(x, Fraction):
        return SpectralScalar.from_fraction(x)
    return NotImplemented


def _monomial_str(exp, coeff: int) -> str:
    parts = []
    a = abs(coeff)
    vars_part = [
        VAR_NAMES[i] + (f"^{d}" if d > 1 else "")
        for i, d in enumerate(exp)
        if d
    ]
    if a != 1 or not vars_part:
        parts.append(str(a))
    parts.extend(vars_part)
    return "*".join(parts)


def poly_to_str(p: dict) -> str:
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda kv: K.deglex_key(kv[0]), reverse=True)
    out = []
    for i, (exp, c) in enumerate(terms):
        sign = "-" if c < 0 else ("+" if i else "")
        out.append(sign + _monomial_str(exp, c))
    return "".join(out)


def scalar_to_str(s: SpectralScalar) -> str:
    num = poly_to_str(s.num)
    if len(s.num) > 1:
        num = f"({num})"
    if s.den == _ONE_P:
        return num
    den = poly_to_str(s.den)
    if len(s.den) > 1:
        den = f"({den})"
    return f"{num}/{den}"


ZERO = SpectralScalar.from_int(0)
ONE = SpectralScalar.from_int(1)
HALF = SpectralScalar.from_fraction(Fraction(1, 2))
LAM = SpectralScalar.var("lam")
MU = SpectralScalar.var("mu")
NU = SpectralScalar.var("nu")


def lam_power(d: int) -> SpectralScalar:
    return SpectralScalar.var("lam", d) if d else ONE
