"""Secant dimensions of X_M via Terracini's lemma.

A general point of X_M is F = L_1^{d_1} ... L_r^{d_r}.  Its affine tangent
space is the degree-d piece of the ideal generated by the F/L_i, and the
tangent space of sigma_s(X_M) at a general point is the span of s such
pieces.  Every dimension here is therefore a rank over F_p.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .linalg import rref
from .ring import (
    FieldConfig,
    HomogeneousPoly,
    LinearForm,
    basis_size,
    power_product,
    product_table,
    random_linear_form,
)

log = logging.getLogger(__name__)


class RankAnomalyError(RuntimeError):
    """A computed dimension exceeded its theoretical upper bound."""


@dataclass(frozen=True)
class MonomialSpec:
    """The exponent pattern M = Z_1^{d_1} ... Z_r^{d_r}, stored sorted descending."""

    exps: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(sorted((int(e) for e in self.exps), reverse=True))
        if not exps:
            raise ValueError("a monomial needs at least one exponent")
        if exps[-1] < 1:
            raise ValueError(f"exponents must be positive, got {exps}")
        object.__setattr__(self, "exps", exps)

    @classmethod
    def parse(cls, text: str) -> MonomialSpec:
        try:
            return cls(tuple(int(t) for t in text.split(",") if t.strip()))
        except ValueError as exc:
            raise ValueError(f"bad monomial {text!r}: {exc}") from None

    @property
    def r(self) -> int:
        return len(self.exps)

    @property
    def d(self) -> int:
        return sum(self.exps)

    def __str__(self) -> str:
        return ",".join(map(str, self.exps))

    def pretty(self) -> str:
        """E.g. ``Z1^2*Z2`` for exponents (2, 1)."""
        return "*".join(f"Z{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(self.exps))


def _as_spec(spec) -> MonomialSpec:
    if isinstance(spec, MonomialSpec):
        return spec
    if isinstance(spec, str):
        return MonomialSpec.parse(spec)
    return MonomialSpec(tuple(spec))


@dataclass(frozen=True, eq=False)
class PointSample:
    spec: MonomialSpec
    forms: tuple[LinearForm, ...]
    F: HomogeneousPoly
    generators: tuple[HomogeneousPoly, ...]

    @property
    def n(self) -> int:
        return self.F.n

    @property
    def prime(self) -> int:
        return self.F.prime


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A subspace of R_d held as the nonzero rows of an RREF matrix."""

    n: int
    d: int
    rows: np.ndarray
    prime: int

    @classmethod
    def span(cls, n: int, d: int, vectors, prime: int) -> SubspaceBasis:
        N = basis_size(n, d)
        vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, N)
        R = rref(vectors, prime)[0] if vectors.shape[0] else vectors
        R.flags.writeable = False
        return cls(n, d, R, prime)

    @property
    def rank(self) -> int:
        return self.rows.shape[0]

    @property
    def ambient(self) -> int:
        return basis_size(self.n, self.d)

    def check_compatible(self, other: SubspaceBasis) -> None:
        if (self.n, self.d, self.prime) != (other.n, other.d, other.prime):
            raise ValueError(
                f"ambient mismatch: (n={self.n}, d={self.d}, p={self.prime}) vs "
                f"(n={other.n}, d={other.d}, p={other.prime})"
            )

    def __repr__(self):
        return f"SubspaceBasis(n={self.n}, d={self.d}, rank={self.rank})"


@dataclass(frozen=True)
class SecantReport:
    n: int
    spec: MonomialSpec
    s: int
    computed_dim: int
    expected_dim: int
    defect: int
    trials: int
    prime: int
    seed: int

    @property
    def defective(self) -> bool:
        return self.defect > 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["spec"] = list(self.spec.exps)
        return out

    @classmethod
    def from_dict(cls, obj) -> SecantReport:
        return cls(**{**obj, "spec": MonomialSpec(tuple(obj["spec"]))})

    def summary(self) -> str:
        head = (
            f"n={self.n} M={self.spec.pretty()} s={self.s}: dim sigma_s = {self.computed_dim} "
            f"(expected {self.expected_dim}, defect {self.defect})"
        )
        if self.defective:
            tail = f"no full-rank certificate found in {self.trials} trial(s) over F_{self.prime}"
        else:
            tail = f"expected dimension certified over F_{self.prime}"
        return f"{head}; {tail} [seed={self.seed}]"


def ambient_dim(n: int, d: int) -> int:
    """Projective dimension of P(R_d)."""
    return comb(d + n - 1, n - 1) - 1


def expected_secant_dim(n: int, spec, s: int) -> int:
    spec = _as_spec(spec)
    if n < 2 or s < 1:
        raise ValueError(f"need n >= 2 and s >= 1, got n={n}, s={s}")
    return min(s * spec.r * (n - 1) + s - 1, ambient_dim(n, spec.d))


def sample_point(
    spec, n: int, rng: np.random.Generator, support: Iterable[int] | None = None,
    prime: int | None = None,
) -> PointSample:
    """Random point of X_M with its tangent generators F/L_i.

    ``support`` restricts every linear form to the given 0-based variables.
    """
    spec = _as_spec(spec)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if support is not None:
        support = sorted(set(support))
        if len(support) < 2:
            raise ValueError(f"support needs at least 2 variables, got {support}")
    prime = FieldConfig().prime if prime is None else prime
    forms = tuple(random_linear_form(rng, n, support, prime) for _ in range(spec.r))
    F = power_product(forms, spec.exps)
    generators = []
    for i in range(spec.r):
        exps = list(spec.exps)
        exps[i] -= 1
        generators.append(power_product(forms, exps))
    return PointSample(spec, forms, F, tuple(generators))


def degree_piece(generators: Sequence[HomogeneousPoly], d: int) -> SubspaceBasis:
    """Degree-``d`` piece of the ideal generated by ``generators``."""
    first = generators[0]
    n, p = first.n, first.prime
    N = basis_size(n, d)
    blocks = []
    for g in generators:
        if g.d > d:
            continue
        table = product_table(n, g.d, d - g.d)
        nz = np.flatnonzero(g.coeffs)
        block = np.zeros((table.shape[1], N), dtype=np.int64)
        # row j is g times the j-th monomial of degree d - deg g
        block[np.arange(table.shape[1])[:, None], table[nz].T] = g.coeffs[nz]
        blocks.append(block)
    rows = np.vstack(blocks) if blocks else np.zeros((0, N), dtype=np.int64)
    return SubspaceBasis.span(n, d, rows, p)


def tangent_space_basis(point: PointSample) -> SubspaceBasis:
    """(I_P)_d = span{x_k * F/L_i}: the affine tangent space at ``point``."""
    return degree_piece(point.generators, point.spec.d)


def sum_span(bases: Sequence[SubspaceBasis]) -> SubspaceBasis:
    if not bases:
        raise ValueError("need at least one subspace")
    first = bases[0]
    for b in bases[1:]:
        first.check_compatible(b)
    if len(bases) == 1:
        return first
    return SubspaceBasis.span(first.n, first.d, np.vstack([b.rows for b in bases]), first.prime)


def subspace_equal(A: SubspaceBasis, B: SubspaceBasis) -> bool:
    A.check_compatible(B)
    return A.rank == B.rank == sum_span([A, B]).rank


def _case_key(n: int, spec: MonomialSpec, s: int) -> tuple[int, ...]:
    return (n, s, len(spec.exps), *spec.exps)


def _point_supports(n: int, s: int, blocks) -> list:
    if blocks is None:
        return [None] * s
    out = []
    for count, idx in blocks:
        out.extend([sorted(idx)] * count)
    return out


def _validate_blocks(n: int, s: int, blocks) -> None:
    seen: set[int] = set()
    total = 0
    for count, idx in blocks:
        idx = set(idx)
        if count < 1:
            raise ValueError(f"block point count must be positive, got {count}")
        if len(idx) < 2:
            raise ValueError(f"block {sorted(idx)} has fewer than 2 variables")
        if min(idx) < 0 or max(idx) >= n:
            raise ValueError(f"block {sorted(idx)} out of range for n={n}")
        if seen & idx:
            raise ValueError(f"blocks overlap on variables {sorted(seen & idx)}")
        seen |= idx
        total += count
    if total != s:
        raise ValueError(f"blocks hold {total} points but s={s}")


def _secant_report(n, spec, s, trials, cfg, blocks) -> SecantReport:
    spec = _as_spec(spec)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    expected = expected_secant_dim(n, spec, s)
    supports = _point_supports(n, s, blocks)
    best = 0
    for t in range(trials):
        rng = cfg.rng(*_case_key(n, spec, s), t)
        bases = [
            tangent_space_basis(sample_point(spec, n, rng, sup, cfg.prime)) for sup in supports
        ]
        best = max(best, sum_span(bases).rank)
        if best - 1 >= expected:
            break
        log.debug("n=%d M=%s s=%d trial %d: rank %d below %d", n, spec, s, t, best, expected + 1)
    computed = best - 1
    if computed > expected:
        raise RankAnomalyError(
            f"computed dim {computed} exceeds expected {expected} for n={n}, M={spec}, s={s}"
        )
    return SecantReport(n, spec, s, computed, expected, expected - computed, trials, cfg.prime, cfg.seed)


def secant_dim(n: int, spec, s: int, trials: int = 3, cfg: FieldConfig | None = None) -> SecantReport:
    """Dimension of sigma_s(X_M): max tangent-span rank over ``trials`` samples, minus one."""
    return _secant_report(n, spec, s, trials, cfg or FieldConfig(), None)


def specialized_secant_dim(
    n: int, spec, s: int, blocks, trials: int = 3, cfg: FieldConfig | None = None
) -> SecantReport:
    """Secant dimension with points confined to disjoint variable blocks.

    ``blocks`` is a list of ``(point count, 0-based variable indices)``.  Since
    specialization can only lower the rank, a result equal to the expected
    dimension certifies the general case too.
    """
    blocks = [(int(c), tuple(idx)) for c, idx in blocks]
    _validate_blocks(n, s, blocks)
    return _secant_report(n, spec, s, trials, cfg or FieldConfig(), blocks)
