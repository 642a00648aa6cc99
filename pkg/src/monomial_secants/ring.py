"""Homogeneous polynomials over a prime field.

Polynomials are dense coefficient vectors indexed by a canonical monomial
basis of R_d = F_p[x1..xn]_d.  The basis is ordered descending
lexicographically on exponent tuples, so position 0 is always x1^d.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import isprime

DEFAULT_PRIME = 2147483647
MIN_PRIME = 2**20
# products of two residues must fit in int64
MAX_PRIME = 2**31


@dataclass(frozen=True)
class FieldConfig:
    """Prime modulus and master RNG seed for a computation."""

    prime: int = DEFAULT_PRIME
    seed: int = 0

    def __post_init__(self):
        if not (MIN_PRIME < self.prime < MAX_PRIME) or not isprime(self.prime):
            raise ValueError(
                f"prime must be a prime in ({MIN_PRIME}, {MAX_PRIME}), got {self.prime}"
            )
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def rng(self, *key: int) -> np.random.Generator:
        return task_rng(self.seed, *key)


def task_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for task ``key`` derived from the master seed.

    The stream depends only on ``(seed, key)``, never on scheduling order.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def _check_prime(prime: int) -> None:
    if not (2 <= prime < MAX_PRIME) or not isprime(prime):
        raise ValueError(f"prime must be a prime below {MAX_PRIME}, got {prime}")


@dataclass(frozen=True, eq=False)
class MonomialBasis:
    n: int
    d: int
    exponents: tuple[tuple[int, ...], ...]
    index: Mapping[tuple[int, ...], int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.exponents)

    @functools.cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.exponents, dtype=np.int64).reshape(len(self), self.n)
        arr.flags.writeable = False
        return arr


def _descending_tuples(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _descending_tuples(n - 1, d - a):
            yield (a,) + rest


@functools.lru_cache(maxsize=None)
def enumerate_monomials(n: int, d: int) -> MonomialBasis:
    if n < 1:
        raise ValueError(f"need at least one variable, got n={n}")
    if d < 0:
        raise ValueError(f"degree must be non-negative, got d={d}")
    exps = tuple(_descending_tuples(n, d))
    return MonomialBasis(n, d, exps, {e: i for i, e in enumerate(exps)})


def basis_size(n: int, d: int) -> int:
    return comb(d + n - 1, n - 1)


def _keys(exps: np.ndarray, base: int) -> np.ndarray:
    # x1 is the most significant digit, so descending lex == descending key
    weights = base ** np.arange(exps.shape[-1] - 1, -1, -1, dtype=np.int64)
    return exps @ weights


@functools.lru_cache(maxsize=None)
def product_table(n: int, a: int, b: int) -> np.ndarray:
    """``T[i, j]`` is the index in degree a+b of monomial_i(a) * monomial_j(b)."""
    ea = enumerate_monomials(n, a).array
    eb = enumerate_monomials(n, b).array
    target = enumerate_monomials(n, a + b).array
    base = a + b + 1
    ascending = _keys(target, base)[::-1]
    summed = _keys(ea, base)[:, None] + _keys(eb, base)[None, :]
    table = len(target) - 1 - np.searchsorted(ascending, summed)
    table.flags.writeable = False
    return table


@dataclass(frozen=True, eq=False)
class HomogeneousPoly:
    """A degree-``d`` form in ``n`` variables with coefficients mod ``prime``."""

    n: int
    d: int
    coeffs: np.ndarray
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.int64) % self.prime
        if arr.shape != (basis_size(self.n, self.d),):
            raise ValueError(
                f"expected {basis_size(self.n, self.d)} coefficients for "
                f"(n={self.n}, d={self.d}), got shape {arr.shape}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def zero(cls, n: int, d: int, prime: int = DEFAULT_PRIME) -> HomogeneousPoly:
        return cls(n, d, np.zeros(basis_size(n, d), dtype=np.int64), prime)

    @classmethod
    def one(cls, n: int, prime: int = DEFAULT_PRIME) -> HomogeneousPoly:
        return cls(n, 0, np.ones(1, dtype=np.int64), prime)

    @classmethod
    def variable(cls, n: int, i: int, prime: int = DEFAULT_PRIME) -> HomogeneousPoly:
        """The coordinate x_{i+1} (``i`` is 0-based)."""
        c = np.zeros(n, dtype=np.int64)
        c[i] = 1
        return cls(n, 1, c, prime)

    @classmethod
    def from_dict(
        cls, n: int, terms: Mapping[Sequence[int], int], prime: int = DEFAULT_PRIME
    ) -> HomogeneousPoly:
        """Build from ``{exponent tuple: integer coefficient}``; all tuples share one degree."""
        degrees = {sum(e) for e in terms}
        if len(degrees) != 1:
            raise ValueError(f"terms must be non-empty and homogeneous, got degrees {degrees}")
        d = degrees.pop()
        basis = enumerate_monomials(n, d)
        coeffs = np.zeros(len(basis), dtype=np.int64)
        for e, c in terms.items():
            coeffs[basis.index[tuple(e)]] += c % prime
        return cls(n, d, coeffs, prime)

    def to_dict(self) -> dict[tuple[int, ...], int]:
        exps = enumerate_monomials(self.n, self.d).exponents
        return {exps[i]: int(self.coeffs[i]) for i in np.flatnonzero(self.coeffs)}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "prime": self.prime,
            "terms": [[list(e), c] for e, c in self.to_dict().items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> HomogeneousPoly:
        if not obj["terms"]:
            return cls.zero(obj["n"], obj["d"], obj["prime"])
        return cls.from_dict(obj["n"], {tuple(e): c for e, c in obj["terms"]}, obj["prime"])

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def _check_compatible(self, other: HomogeneousPoly) -> None:
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
        if self.prime != other.prime:
            raise ValueError(f"field mismatch: F_{self.prime} vs F_{other.prime}")

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return (
            self.n == other.n
            and self.d == other.d
            and self.prime == other.prime
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def __add__(self, other: HomogeneousPoly) -> HomogeneousPoly:
        self._check_compatible(other)
        if self.d != other.d:
            raise ValueError(f"cannot add degree {self.d} and degree {other.d} forms")
        return HomogeneousPoly(self.n, self.d, self.coeffs + other.coeffs, self.prime)

    def __neg__(self) -> HomogeneousPoly:
        return HomogeneousPoly(self.n, self.d, -self.coeffs, self.prime)

    def __sub__(self, other: HomogeneousPoly) -> HomogeneousPoly:
        return self + (-other)

    def scale(self, c: int) -> HomogeneousPoly:
        return HomogeneousPoly(self.n, self.d, self.coeffs * (c % self.prime), self.prime)

    def __mul__(self, other):
        if isinstance(other, HomogeneousPoly):
            return multiply(self, other)
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> HomogeneousPoly:
        out = HomogeneousPoly.one(self.n, self.prime)
        for _ in range(k):
            out = multiply(out, self)
        return out

    def __repr__(self):
        terms = self.to_dict()
        if not terms:
            return f"HomogeneousPoly(n={self.n}, d={self.d}, 0)"
        shown = " + ".join(
            f"{c}*" + "*".join(f"x{i + 1}^{k}" for i, k in enumerate(e) if k) for e, c in terms.items()
        )
        return f"HomogeneousPoly(n={self.n}, d={self.d}, {shown})"


@dataclass(frozen=True, eq=False)
class LinearForm:
    coeffs: np.ndarray
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.int64) % self.prime
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("a linear form needs a non-empty 1-d coefficient vector")
        if not arr.any():
            raise ValueError("a linear form cannot be identically zero")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def n(self) -> int:
        return self.coeffs.size

    def as_poly(self) -> HomogeneousPoly:
        return HomogeneousPoly(self.n, 1, self.coeffs, self.prime)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.prime == other.prime and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None


def _as_poly(f) -> HomogeneousPoly:
    return f.as_poly() if isinstance(f, LinearForm) else f


def multiply(f: HomogeneousPoly, g: HomogeneousPoly) -> HomogeneousPoly:
    f, g = _as_poly(f), _as_poly(g)
    f._check_compatible(g)
    p = f.prime
    table = product_table(f.n, f.d, g.d)
    nz = np.flatnonzero(f.coeffs)
    out = np.zeros(basis_size(f.n, f.d + g.d), dtype=np.int64)
    if nz.size:
        # each partial sum stays below len(f) * p < 2^63
        np.add.at(out, table[nz].ravel(), (f.coeffs[nz, None] * g.coeffs[None, :] % p).ravel())
    return HomogeneousPoly(f.n, f.d + g.d, out, p)


def power_product(forms: Sequence[LinearForm], exps: Sequence[int]) -> HomogeneousPoly:
    """Like :func:`linear_power_product` but zero exponents are allowed (factor skipped)."""
    if not forms or len(forms) != len(exps):
        raise ValueError("forms and exps must be non-empty and of equal length")
    out = HomogeneousPoly.one(forms[0].n, forms[0].prime)
    for L, e in zip(forms, exps):
        if e < 0:
            raise ValueError(f"negative exponent {e}")
        for _ in range(e):
            out = multiply(out, L)
    return out


def linear_power_product(forms: Sequence[LinearForm], exps: Sequence[int]) -> HomogeneousPoly:
    """Return prod(L_i ** e_i) for linear forms L_i and exponents e_i >= 1."""
    if not forms or not exps:
        raise ValueError("need at least one linear form")
    if len(forms) != len(exps):
        raise ValueError(f"{len(forms)} forms but {len(exps)} exponents")
    if any(e < 1 for e in exps):
        raise ValueError(f"exponents must be positive, got {list(exps)}")
    return power_product(forms, exps)


def substitute_linear(f: HomogeneousPoly, change) -> HomogeneousPoly:
    """Replace each x_i by the linear form whose coefficients are row i of ``change``."""
    change = np.asarray(change, dtype=np.int64)
    if change.shape != (f.n, f.n):
        raise ValueError(f"change of variables must be {f.n}x{f.n}, got {change.shape}")
    p = f.prime
    images = [HomogeneousPoly(f.n, 1, row, p) for row in change]
    # powers[i][k] = images[i] ** k
    powers = []
    for img in images:
        seq = [HomogeneousPoly.one(f.n, p)]
        for _ in range(f.d):
            seq.append(multiply(seq[-1], img))
        powers.append(seq)
    out = HomogeneousPoly.zero(f.n, f.d, p)
    for e, c in f.to_dict().items():
        term = HomogeneousPoly(f.n, 0, [c], p)
        for i, k in enumerate(e):
            if k:
                term = multiply(term, powers[i][k])
        out = out + term
    return out


def random_linear_form(
    rng: np.random.Generator,
    n: int,
    support: Iterable[int] | None = None,
    prime: int = DEFAULT_PRIME,
) -> LinearForm:
    """Uniformly random nonzero linear form, optionally supported on 0-based ``support``."""
    idx = np.arange(n) if support is None else np.array(sorted(set(support)), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("support must be non-empty")
    if idx.min() < 0 or idx.max() >= n:
        raise ValueError(f"support {idx.tolist()} out of range for n={n}")
    coeffs = np.zeros(n, dtype=np.int64)
    while True:
        vals = rng.integers(0, prime, size=idx.size, dtype=np.int64)
        if vals.any():
            coeffs[idx] = vals
            return LinearForm(coeffs, prime)
