"""Sparse multivariate Laurent polynomials over exact integers.

One representation carries every polynomial in the project: homomorphism
polynomials over a VarSpace, and ad-hoc univariate/bivariate specializations
(x, y, p, q, u, t, h, k, u<s>, u<s>_<c>).  Canonical text is the frozen
equality key used for classification and persistence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class VarSpace:
    """Variables of the order-q homomorphism polynomial: x_1..x_q, then the
    edge/loop weights y_{i,j} for 1 <= i <= j <= q in lexicographic pair order."""

    q: int
    names: tuple[str, ...]

    @classmethod
    def of_order(cls, q: int) -> "VarSpace":
        if q < 2:
            raise ValueError(f"weight graph order must be at least 2, got {q}")
        names = [f"x{i}" for i in range(1, q + 1)]
        names += [f"y{i}_{j}" for i in range(1, q + 1) for j in range(i, q + 1)]
        return cls(q, tuple(names))

    def __post_init__(self):
        expected = 2 * self.q + math.comb(self.q, 2)
        if len(self.names) != expected:
            raise ValueError(f"order {self.q} needs {expected} variables, got {len(self.names)}")

    def x_index(self, i: int) -> int:
        if not 1 <= i <= self.q:
            raise ValueError(f"x index {i} outside 1..{self.q}")
        return i - 1

    def y_index(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        if not 1 <= i <= j <= self.q:
            raise ValueError(f"y index ({i},{j}) outside the order-{self.q} space")
        before = (i - 1) * self.q - (i - 1) * (i - 2) // 2
        return self.q + before + (j - i)


class Polynomial:
    """Immutable map from exponent vectors to nonzero integer coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        object.__setattr__(self, "vars", tuple(variables))
        clean = {}
        if terms:
            width = len(self.vars)
            for exps, coeff in terms.items():
                if coeff == 0:
                    continue
                if len(exps) != width:
                    raise ValueError(f"exponent vector {exps} does not match {width} variables")
                clean[tuple(exps)] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables, value: int) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables, name: str, power: int = 1) -> "Polynomial":
        variables = tuple(variables)
        exps = [0] * len(variables)
        exps[variables.index(name)] = power
        return cls(variables, {tuple(exps): 1})

    @classmethod
    def monomial(cls, variables, exps, coeff: int = 1) -> "Polynomial":
        return cls(variables, {tuple(exps): coeff})

    # -- ring operations ----------------------------------------------------

    def _check_space(self, other: "Polynomial") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable spaces differ: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.vars, other)
        self._check_space(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            new = terms.get(exps, 0) + coeff
            if new:
                terms[exps] = new
            else:
                terms.pop(exps, None)
        return Polynomial(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.vars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Polynomial(self.vars)
            return Polynomial(self.vars, {e: c * other for e, c in self.terms.items()})
        self._check_space(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], int] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                new = out.get(key, 0) + ca * cb
                if new:
                    out[key] = new
                else:
                    del out[key]
        return Polynomial(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if power < 0:
            if len(self.terms) != 1:
                raise ValueError("negative powers only defined for monomials")
            ((exps, coeff),) = self.terms.items()
            if coeff not in (1, -1):
                raise ValueError(f"cannot invert coefficient {coeff} over the integers")
            sign = -1 if coeff == -1 and power % 2 else 1
            return Polynomial(self.vars, {tuple(e * power for e in exps): sign})
        result = Polynomial.constant(self.vars, 1)
        base = self
        k = power
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def mul_monomial(self, exps, coeff: int = 1) -> "Polynomial":
        """Multiply by coeff * prod(var^exps); negative entries divide exactly."""
        exps = tuple(exps)
        if len(exps) != len(self.vars):
            raise ValueError("monomial width mismatch")
        return Polynomial(
            self.vars,
            {tuple(a + b for a, b in zip(e, exps)): c * coeff for e, c in self.terms.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        raise TypeError("Polynomial is not hashable; key on canonical_text()")

    def __repr__(self):
        return f"Polynomial({self.canonical_text()!r})"

    # -- substitution and restriction ---------------------------------------

    def substitute(self, mapping: dict, strict: bool = False) -> "Polynomial":
        """Ring homomorphism sending each mapped variable to a Polynomial or int.

        All Polynomial images must share one variable space, which becomes the
        output space (unmapped variables are appended after it and retained).
        A variable with a negative exponent may only map to a Laurent monomial
        with coefficient +-1, never to a sum.
        """
        image_vars: tuple[str, ...] | None = None
        for name, img in mapping.items():
            if name not in self.vars:
                raise ValueError(f"unknown variable {name!r}")
            if isinstance(img, Polynomial):
                if image_vars is None:
                    image_vars = img.vars
                elif image_vars != img.vars:
                    raise ValueError("all substitution images must share one variable space")
        retained = [v for v in self.vars if v not in mapping]
        if strict and retained:
            raise ValueError(f"unmapped variables in strict mode: {retained}")
        out_vars = (image_vars or ()) + tuple(retained)
        if len(set(out_vars)) != len(out_vars):
            raise ValueError("retained variables collide with image variables")

        width = len(out_vars)
        retained_pos = {v: out_vars.index(v) for v in retained}
        one = Polynomial.constant(out_vars, 1)
        power_cache: dict[tuple[str, int], Polynomial] = {}

        def image_power(name: str, exp: int) -> Polynomial:
            key = (name, exp)
            cached = power_cache.get(key)
            if cached is not None:
                return cached
            img = mapping[name]
            if isinstance(img, Polynomial):
                if width != len(img.vars):
                    pad = (0,) * (width - len(img.vars))
                    img = Polynomial(out_vars, {e + pad: c for e, c in img.terms.items()})
                if exp < 0 and len(img.terms) != 1:
                    raise ValueError(f"negative exponent on {name!r} requires a monomial image")
                value = img ** exp
            else:
                if exp >= 0:
                    value = Polynomial.constant(out_vars, img ** exp)
                elif img in (1, -1):
                    value = Polynomial.constant(out_vars, img ** (-exp) if img == -1 else 1)
                else:
                    raise ValueError(f"cannot invert constant image {img} of {name!r}")
            power_cache[key] = value
            return value

        result_terms: dict[tuple[int, ...], int] = {}
        for exps, coeff in self.terms.items():
            part = None
            base = [0] * width
            for name, e in zip(self.vars, exps):
                if e == 0:
                    continue
                if name in retained_pos:
                    base[retained_pos[name]] = e
                else:
                    factor = image_power(name, e)
                    part = factor if part is None else part * factor
            if part is None:
                part = one
            for pexps, pcoeff in part.terms.items():
                key = tuple(a + b for a, b in zip(pexps, base))
                new = result_terms.get(key, 0) + coeff * pcoeff
                if new:
                    result_terms[key] = new
                else:
                    del result_terms[key]
        return Polynomial(out_vars, result_terms)

    def restrict_zero(self, variables) -> "Polynomial":
        """Keep the monomials with exponent 0 on every listed variable and drop
        those variables from the space."""
        drop = set(variables)
        unknown = drop - set(self.vars)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        keep_idx = [i for i, v in enumerate(self.vars) if v not in drop]
        drop_idx = [i for i, v in enumerate(self.vars) if v in drop]
        out_vars = tuple(self.vars[i] for i in keep_idx)
        out: dict[tuple[int, ...], int] = {}
        for exps, coeff in self.terms.items():
            if any(exps[i] for i in drop_idx):
                continue
            out[tuple(exps[i] for i in keep_idx)] = coeff
        return Polynomial(out_vars, out)

    # -- evaluation and serialization ---------------------------------------

    def evaluate(self, values: dict[str, int]):
        """Exact evaluation; returns an int when possible, else a Fraction."""
        total = Fraction(0)
        points = [values[v] for v in self.vars]
        for exps, coeff in self.terms.items():
            term = Fraction(coeff)
            for point, e in zip(points, exps):
                if e == 0:
                    continue
                if point == 0 and e < 0:
                    raise ZeroDivisionError("negative exponent at zero")
                term *= Fraction(point) ** e
            total += term
        return int(total) if total.denominator == 1 else total

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Graded-lexicographic order, largest first; the frozen canonical order."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def canonical_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            factors = [f"{name}^{e}" for name, e in zip(self.vars, exps) if e]
            parts.append("*".join([str(coeff)] + factors))
        return " + ".join(parts)

    def to_json_dict(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                {"exp": list(exps), "coeff": str(coeff)} for exps, coeff in self.sorted_terms()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b
