"""Brute-force checks of the structural facts behind the secant computations.

Each check builds both sides as explicit subspaces of R_d and compares them
with ranks.  Checks on random ("general") data retry with fresh samples
before reporting failure, since a single unlucky draw can drop a rank.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from .linalg import intersect_rowspaces, rank
from .ring import (
    DEFAULT_PRIME,
    HomogeneousPoly,
    LinearForm,
    _check_prime,
    basis_size,
    power_product,
    random_linear_form,
    substitute_linear,
)
from .terracini import (
    MonomialSpec,
    PointSample,
    SubspaceBasis,
    _as_spec,
    degree_piece,
    sample_point,
    subspace_equal,
    sum_span,
    tangent_space_basis,
)

log = logging.getLogger(__name__)

ATTEMPTS = 3


def _retry(check: Callable[[np.random.Generator], bool], rng, name: str, attempts: int = ATTEMPTS) -> bool:
    for attempt in range(attempts):
        # record the generator state so a failing draw can be replayed
        state = rng.bit_generator.state["state"]
        if check(rng):
            return True
        log.warning("%s failed on attempt %d/%d (rng state %s)", name, attempt + 1, attempts, state)
    return False


def intersection_dim(A: SubspaceBasis, B: SubspaceBasis) -> int:
    A.check_compatible(B)
    return A.rank + B.rank - sum_span([A, B]).rank


def intersect(A: SubspaceBasis, B: SubspaceBasis) -> SubspaceBasis:
    """Explicit basis of A ∩ B."""
    A.check_compatible(B)
    rows = intersect_rowspaces(A.rows, B.rows, A.prime)
    return SubspaceBasis.span(A.n, A.d, rows, A.prime)


def principal_ideal_piece(h: HomogeneousPoly, d: int) -> SubspaceBasis:
    """span{h * q : q a monomial of degree d - deg h}."""
    if h.d > d:
        raise ValueError(f"deg h = {h.d} exceeds target degree {d}")
    return degree_piece([h], d)


@dataclass(frozen=True, eq=False)
class PairPowerPiece:
    Li: LinearForm
    Lj: LinearForm
    m: int
    d: int
    basis: SubspaceBasis


def pair_power_piece(Li: LinearForm, Lj: LinearForm, m: int, d: int) -> PairPowerPiece:
    """Degree-``d`` piece of the ideal (Li, Lj)^m."""
    if m < 1:
        raise ValueError(f"power must be positive, got {m}")
    if Li.n != Lj.n or Li.prime != Lj.prime:
        raise ValueError("linear forms live in different rings")
    if rank(np.vstack([Li.coeffs, Lj.coeffs]), Li.prime) < 2:
        raise ValueError("Li and Lj are proportional")
    n, p = Li.n, Li.prime
    if m > d:
        basis = SubspaceBasis.span(n, d, np.zeros((0, basis_size(n, d))), p)
    else:
        gens = [power_product([Li, Lj], [a, m - a]) for a in range(m + 1)]
        basis = degree_piece(gens, d)
    return PairPowerPiece(Li, Lj, m, d, basis)


def structure_rhs(point: PointSample) -> SubspaceBasis:
    """Degree-d piece of (prod L_i^{d_i-1}) ∩ (∩_{i<j} (L_i, L_j)^{d_i+d_j-1})."""
    spec, forms = point.spec, point.forms
    h = power_product(forms, [e - 1 for e in spec.exps])
    acc = principal_ideal_piece(h, spec.d)
    for i, j in combinations(range(spec.r), 2):
        piece = pair_power_piece(forms[i], forms[j], spec.exps[i] + spec.exps[j] - 1, spec.d)
        acc = intersect(acc, piece.basis)
    return acc


def verify_tangent_structure(point: PointSample) -> bool:
    """Tangent piece equals its description as an intersection of ideals."""
    if point.spec.r < 2:
        raise ValueError("the intersection description needs r >= 2")
    return subspace_equal(tangent_space_basis(point), structure_rhs(point))


def check_tangent_structure(n: int, spec, rng, prime: int = DEFAULT_PRIME) -> bool:
    spec = _as_spec(spec)
    return _retry(
        lambda g: verify_tangent_structure(sample_point(spec, n, g, prime=prime)),
        rng,
        f"tangent structure n={n} M={spec}",
    )


def _binary_claim_once(r: int, rng, prime: int) -> bool:
    forms = [random_linear_form(rng, 2, prime=prime) for _ in range(r)]
    gens = [power_product(forms, [0 if k == i else 1 for k in range(r)]) for i in range(r)]
    return all(degree_piece(gens, e).rank == e + 1 for e in (r - 1, r, r + 1))


def verify_binary_claim(r: int, rng, prime: int = DEFAULT_PRIME) -> bool:
    """Products of r-1 out of r general binary linear forms generate (x1, x2)^{r-1}.

    Checked in degrees r-1, r, r+1, where the power ideal is all of R_e.
    """
    if r < 2:
        raise ValueError(f"need r >= 2, got {r}")
    return _retry(lambda g: _binary_claim_once(r, g, prime), rng, f"binary claim r={r}")


def _binary_tangent_once(spec: MonomialSpec, rng, prime: int) -> bool:
    point = sample_point(spec, 2, rng, prime=prime)
    h = power_product(point.forms, [e - 1 for e in spec.exps])
    return subspace_equal(tangent_space_basis(point), principal_ideal_piece(h, spec.d))


def verify_binary_tangent(spec, rng, prime: int = DEFAULT_PRIME) -> bool:
    """For binary forms the tangent piece is the principal piece of prod L_i^{d_i-1}."""
    spec = _as_spec(spec)
    if spec.d < 3:
        log.info("binary tangent check for M=%s below the d >= 3 standing assumption", spec)
    return _retry(lambda g: _binary_tangent_once(spec, g, prime), rng, f"binary tangent M={spec}")


def xyz_identity_sides(prime: int = DEFAULT_PRIME, perturbed: bool = False):
    """Both sides of 4xyz = x((y+z)^2 - (y-z)^2) in F_p[x, y, z]."""
    x, y, z = (HomogeneousPoly.variable(3, i, prime) for i in range(3))
    lhs = 4 * (x * y * z)
    a, b = (y + z) ** 2, (y - z) ** 2
    rhs = x * (a + b if perturbed else a - b)
    return lhs, rhs


def verify_identity_xyz(prime: int = DEFAULT_PRIME, perturbed: bool = False) -> bool:
    _check_prime(prime)
    lhs, rhs = xyz_identity_sides(prime, perturbed)
    return lhs == rhs


NODAL_CHANGE = ((-1, -1, 0), (1, -1, 0), (0, 0, -1))


def nodal_cubic_sides(prime: int = DEFAULT_PRIME, change=NODAL_CHANGE):
    """(xyz - x^3 - y^3 after the change of variables, X^2(6Y+Z) + Y^2(2Y-Z))."""
    x, y, z = (HomogeneousPoly.variable(3, i, prime) for i in range(3))
    nodal = x * y * z - x**3 - y**3
    # after substitution the same coordinates play the role of X, Y, Z
    target = x**2 * (6 * y + z) + y**2 * (2 * y - z)
    return substitute_linear(nodal, change), target


def verify_nodal_cubic(prime: int = DEFAULT_PRIME, change=NODAL_CHANGE, relabel=None) -> bool:
    """Check the normal form of the nodal cubic; ``relabel`` is applied to both sides."""
    _check_prime(prime)
    lhs, rhs = nodal_cubic_sides(prime, change)
    if relabel is not None:
        lhs, rhs = substitute_linear(lhs, relabel), substitute_linear(rhs, relabel)
    return lhs == rhs


def _extension_once(t: int, n: int, spec: MonomialSpec, s: int, rng, prime: int) -> bool:
    points = [sample_point(spec, n, rng, range(t), prime) for _ in range(s)]
    total = sum_span([tangent_space_basis(pt) for pt in points])
    return total.rank == s * spec.r * (n - 1) + s


def verify_extension(t: int, n: int, spec, s: int, rng, prime: int = DEFAULT_PRIME) -> bool:
    """Points specialized to the first ``t`` variables still give a full-rank tangent span in n.

    With t = 2 the binary count s(r+1) <= d+1 is required; larger t is
    accepted as is, so a defective t-variable configuration reports False.
    """
    spec = _as_spec(spec)
    if not 2 <= t < n:
        raise ValueError(f"need 2 <= t < n, got t={t}, n={n}")
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    if t == 2 and s * (spec.r + 1) > spec.d + 1:
        raise ValueError(f"s(r+1) = {s * (spec.r + 1)} exceeds d+1 = {spec.d + 1}")
    return _retry(
        lambda g: _extension_once(t, n, spec, s, g, prime), rng, f"extension t={t} n={n} M={spec} s={s}"
    )
