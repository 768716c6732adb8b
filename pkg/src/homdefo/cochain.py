"""Twisted Hochschild cochains, the Gerstenhaber bracket and the compatible complex.

``C^n`` is the space of n-linear maps ``f: A^n -> M`` with
``beta o f = f o alpha^{(x)n}``.  The compatible complex puts ``n`` copies of
``C^n`` in degree ``n`` and mixes the two Hochschild differentials.
Differential matrices are formed on computed bases of these constrained
spaces, with columns written in ambient (full tensor) coordinates.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from . import exactlin as el
from .bimod import Bimodule, CompatibleBimodule, sum_bimodule
from .exactlin import DimensionError
from .homalg import (CheckReport, CompatibleHomAlgebra, HomAssociativeAlgebra,
                     MultilinearMap, Violation, check_compatible)


class NotEquivariantError(ValueError):
    """A cochain does not satisfy ``beta o f = f o alpha^{(x)n}``."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed the configured size limits."""


def _env_cells(default: int = 50_000) -> int:
    raw = os.environ.get("HOMDEFO_MAX_CELLS")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


@dataclass(frozen=True)
class Limits:
    max_degree: int = 4
    max_dim_product: int = 16
    max_cells: int = field(default_factory=_env_cells)

    def check_cells(self, dimA: int, dimM: int, n: int) -> None:
        cells = dimM * dimA ** n
        if cells > self.max_cells:
            raise ResourceLimitError(
                f"degree-{n} cochains need {cells} tensor cells (limit {self.max_cells})")

    def check_degree(self, n: int) -> None:
        if n > self.max_degree:
            raise ResourceLimitError(f"degree {n} exceeds the limit {self.max_degree}")

    def check_dims(self, dimA: int, dimM: int) -> None:
        if dimA * dimM > self.max_dim_product:
            raise ResourceLimitError(
                f"dim A * dim M = {dimA * dimM} exceeds the limit {self.max_dim_product}")


DEFAULT_LIMITS = Limits()


# -- elementary operations on cochains -------------------------------------

def twist_defect(f: MultilinearMap, alpha, beta) -> MultilinearMap:
    """``beta o f - f o alpha^{(x)n}``."""
    return f.postcompose(beta) - f.precompose_all(alpha)


def is_equivariant(f: MultilinearMap, alpha, beta) -> bool:
    return twist_defect(f, alpha, beta).is_zero()


def _require_equivariant(f, alpha, beta, what="cochain"):
    if not is_equivariant(f, alpha, beta):
        raise NotEquivariantError(f"{what} does not commute with the twist maps")


def hochschild_delta_raw(mu: MultilinearMap, alpha, left: MultilinearMap,
                         right: MultilinearMap, f: MultilinearMap) -> MultilinearMap:
    """Hom-Hochschild coboundary of ``f`` for the product ``mu`` and actions ``left``, ``right``."""
    n = f.arity
    an1 = el.matrix_power(alpha, n - 1)
    out = left.precompose([an1, None]).insert(1, f)
    for i in range(1, n + 1):
        maps = [None if s == i - 1 else alpha for s in range(n)]
        term = f.precompose(maps).insert(i - 1, mu)
        out = out + term if i % 2 == 0 else out - term
    last = right.precompose([None, an1]).insert(0, f)
    return out + last if (n + 1) % 2 == 0 else out - last


def hochschild_delta(which: int, A: CompatibleHomAlgebra, M: CompatibleBimodule,
                     f: MultilinearMap, n: int | None = None, check: bool = True) -> MultilinearMap:
    """``^1 delta`` (which=1) or ``^2 delta`` (which=2) applied to ``f in C^n``."""
    if n is not None and f.arity != n:
        raise DimensionError(f"cochain has degree {f.arity}, expected {n}")
    if check:
        _require_equivariant(f, A.alpha, M.beta)
    left, right = M.actions(which)
    return hochschild_delta_raw(A.product(which), A.alpha, left, right, f)


def hochschild_delta_single(A: HomAssociativeAlgebra, M: Bimodule, f: MultilinearMap,
                            check: bool = True) -> MultilinearMap:
    if check:
        _require_equivariant(f, A.alpha, M.beta)
    return hochschild_delta_raw(A.mu, A.alpha, M.left, M.right, f)


def diamond(f: MultilinearMap, g: MultilinearMap, alpha) -> MultilinearMap:
    """Twisted Gerstenhaber composition ``f <> g``."""
    m, n = f.arity - 1, g.arity - 1
    an = el.matrix_power(alpha, n)
    total = None
    for i in range(1, m + 2):
        maps = [None if s == i - 1 else an for s in range(m + 1)]
        term = f.precompose(maps).insert(i - 1, g)
        if ((i - 1) * n) % 2:
            term = -term
        total = term if total is None else total + term
    return total


def gerstenhaber_bracket(alpha, f: MultilinearMap, g: MultilinearMap,
                         check: bool = True) -> MultilinearMap:
    """``[f, g] = f <> g - (-1)^{mn} g <> f`` for ``f in C^{m+1}``, ``g in C^{n+1}``."""
    alpha = el.as_matrix(alpha)
    if check:
        _require_equivariant(f, alpha, alpha, "first argument")
        _require_equivariant(g, alpha, alpha, "second argument")
    m, n = f.arity - 1, g.arity - 1
    fg, gf = diamond(f, g, alpha), diamond(g, f, alpha)
    return fg + gf if (m * n) % 2 else fg - gf


def delta_via_bracket(A: HomAssociativeAlgebra | CompatibleHomAlgebra, f: MultilinearMap,
                      n: int | None = None, which: int = 1, check: bool = True) -> MultilinearMap:
    """``(-1)^{n-1} [mu, f]`` on self-coefficient cochains."""
    mu = A.mu if isinstance(A, HomAssociativeAlgebra) else A.product(which)
    n = f.arity if n is None else n
    br = gerstenhaber_bracket(A.alpha, mu, f, check=check)
    return br if (n - 1) % 2 == 0 else -br


# -- compatible cochains ---------------------------------------------------

@dataclass(eq=False)
class CompatibleCochain:
    """``(f_1, ..., f_n)`` in ``C^{n,c}``."""

    parts: tuple

    def __post_init__(self):
        self.parts = tuple(p if isinstance(p, MultilinearMap) else MultilinearMap(p)
                           for p in self.parts)
        n = len(self.parts)
        if n == 0:
            raise DimensionError("a compatible cochain has at least one part")
        for p in self.parts:
            if p.arity != n:
                raise DimensionError(f"every part of a degree-{n} cochain must be {n}-linear")

    @property
    def degree(self) -> int:
        return len(self.parts)

    @classmethod
    def zero(cls, n: int, dimA: int, dimM: int) -> "CompatibleCochain":
        return cls(tuple(MultilinearMap.zero((dimA,) * n, dimM) for _ in range(n)))

    def flat(self) -> np.ndarray:
        return np.concatenate([p.flat() for p in self.parts])

    @classmethod
    def from_flat(cls, vec, n: int, dimA: int, dimM: int) -> "CompatibleCochain":
        size = dimM * dimA ** n
        vec = np.asarray(vec, dtype=object)
        if vec.shape[0] != n * size:
            raise DimensionError("flat vector has the wrong length")
        return cls(tuple(MultilinearMap.from_flat(vec[s * size:(s + 1) * size], (dimA,) * n, dimM)
                         for s in range(n)))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def __add__(self, other):
        return CompatibleCochain(tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __sub__(self, other):
        return CompatibleCochain(tuple(a - b for a, b in zip(self.parts, other.parts)))

    def __neg__(self):
        return CompatibleCochain(tuple(-a for a in self.parts))

    def __mul__(self, c):
        return CompatibleCochain(tuple(a * c for a in self.parts))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CompatibleCochain):
            return NotImplemented
        return self.degree == other.degree and all(a == b for a, b in zip(self.parts, other.parts))

    __hash__ = None


def compatible_delta(A: CompatibleHomAlgebra, M: CompatibleBimodule, c: CompatibleCochain,
                     check: bool = True) -> CompatibleCochain:
    """Staggered differential: slot i is ``^2 delta f_{i-1} + ^1 delta f_i``."""
    if not isinstance(c, CompatibleCochain):
        c = CompatibleCochain(tuple(c))
    d1 = [hochschild_delta(1, A, M, f, check=check) for f in c.parts]
    d2 = [hochschild_delta(2, A, M, f, check=False) for f in c.parts]
    n = c.degree
    out = [d1[0]]
    for i in range(1, n):
        out.append(d2[i - 1] + d1[i])
    out.append(d2[n - 1])
    return CompatibleCochain(tuple(out))


def upsilon(c: CompatibleCochain) -> MultilinearMap:
    """``(f_1, ..., f_n) -> f_1 + ... + f_n``."""
    return reduce(lambda x, y: x + y, c.parts)


# -- Maurer-Cartan checks --------------------------------------------------

def _bracket_violations(name: str, t: MultilinearMap) -> list[Violation]:
    out = []
    shape = t.domain_dims
    flat_in = t.coeffs.reshape(-1, t.codomain_dim)
    for pos, row in enumerate(flat_in):
        if any(x != 0 for x in row):
            out.append(Violation(name, tuple(int(i) for i in np.unravel_index(pos, shape)),
                                 tuple(row.tolist())))
    return out


def check_maurer_cartan_pair(alpha, mu1: MultilinearMap, mu2: MultilinearMap) -> CheckReport:
    """``[mu1, mu1] = [mu2, mu2] = [mu1, mu2] = 0`` in the twisted bracket.

    Products that are not multiplicative (outside ``C^2_alpha``) are reported
    as failures rather than raised, so the check is total.
    """
    alpha = el.as_matrix(alpha)
    notes = []
    viol = []
    for name, mu in (("mu1", mu1), ("mu2", mu2)):
        d = twist_defect(mu, alpha, alpha)
        if not d.is_zero():
            notes.append(f"{name} is not in C^2_alpha (alpha is not multiplicative)")
            viol += _bracket_violations(f"{name} twist-equivariance", d)
    if viol:
        return CheckReport(ok=False, violations=viol, notes=notes)
    for name, f, g in (("[mu1,mu1]", mu1, mu1), ("[mu2,mu2]", mu2, mu2), ("[mu1,mu2]", mu1, mu2)):
        viol += _bracket_violations(name, gerstenhaber_bracket(alpha, f, g, check=False))
    return CheckReport(ok=not viol, violations=viol)


def twisted_mc_check(A: CompatibleHomAlgebra, mu1p: MultilinearMap,
                     mu2p: MultilinearMap) -> CheckReport:
    """Is ``(mu1', mu2')`` Maurer-Cartan for the differentials ``[mu1, -]``, ``[mu2, -]``?"""
    al = A.alpha
    for name, f in (("mu1'", mu1p), ("mu2'", mu2p)):
        _require_equivariant(f, al, al, name)
    br = lambda f, g: gerstenhaber_bracket(al, f, g, check=False)
    half = el.scalar("1/2")
    c1 = br(A.mu1, mu1p) + br(mu1p, mu1p) * half
    c2 = br(A.mu2, mu2p) + br(mu2p, mu2p) * half
    c12 = br(A.mu1, mu2p) + br(A.mu2, mu1p) + br(mu1p, mu2p)
    viol = (_bracket_violations("d1 mu1' + 1/2[mu1',mu1']", c1)
            + _bracket_violations("d2 mu2' + 1/2[mu2',mu2']", c2)
            + _bracket_violations("d1 mu2' + d2 mu1' + [mu1',mu2']", c12))
    return CheckReport(ok=not viol, violations=viol)


# -- bases, matrices, cohomology -------------------------------------------

@dataclass(eq=False)
class CochainSpace:
    degree: int
    basis: list
    dimA: int
    dimM: int

    @property
    def ambient_dim(self) -> int:
        return self.dimM * self.dimA ** self.degree

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> np.ndarray:
        return el.columns_to_matrix([b.flat() for b in self.basis], self.ambient_dim)

    def contains(self, f: MultilinearMap) -> bool:
        if not self.basis:
            return f.is_zero()
        return el.solve(self.basis_matrix(), f.flat()) is not None


def _kron_power(m: np.ndarray, n: int) -> np.ndarray:
    out = el.identity(1)
    for _ in range(n):
        out = np.kron(out, m)
    return out


def cochain_space(A: CompatibleHomAlgebra, M: CompatibleBimodule | None, n: int,
                  limits: Limits = DEFAULT_LIMITS) -> CochainSpace:
    """Basis of ``C^n_{alpha,beta}(A, M)`` (adjoint coefficients when ``M`` is None)."""
    if n < 1:
        raise ValueError("cochain degree must be at least 1")
    beta = A.alpha if M is None else M.beta
    return _cochain_space(A.alpha, beta, n, limits)


def _cochain_space(alpha, beta, n, limits=DEFAULT_LIMITS) -> CochainSpace:
    dA, dM = alpha.shape[0], beta.shape[0]
    limits.check_cells(dA, dM, n)
    size = dM * dA ** n
    if _is_identity(alpha) and _is_identity(beta):
        vecs = [_unit_vec(size, j) for j in range(size)]
    else:
        constraint = (np.kron(el.identity(dA ** n), beta)
                      - np.kron(_kron_power(alpha.T.copy(), n), el.identity(dM)))
        vecs = el.kernel_basis(constraint)
    basis = [MultilinearMap.from_flat(v, (dA,) * n, dM) for v in vecs]
    return CochainSpace(n, basis, dA, dM)


def _unit_vec(size, j):
    v = el.zeros(size)
    v[j] = el.ONE
    return v


def _is_identity(m) -> bool:
    n = m.shape[0]
    return all(m[i, j] == (1 if i == j else 0) for i in range(n) for j in range(n))


@dataclass
class CohomologyReport:
    degree: int
    dim_cochains: int
    dim_cocycles: int
    dim_coboundaries: int

    @property
    def dim_H(self) -> int:
        return self.dim_cocycles - self.dim_coboundaries

    def to_json(self) -> dict:
        return {"degree": self.degree, "dim_cochains": self.dim_cochains,
                "dim_cocycles": self.dim_cocycles, "dim_coboundaries": self.dim_coboundaries,
                "dim_H": self.dim_H}


class CochainComplex:
    """Compatible cochain complex of ``A`` with coefficients in ``M``.

    Bases and differential matrices are cached per degree; the cache is
    guarded by a lock so one complex can be shared between threads.
    """

    def __init__(self, A: CompatibleHomAlgebra, M: CompatibleBimodule | None = None,
                 limits: Limits = DEFAULT_LIMITS):
        self.A = A
        self.M = CompatibleBimodule.adjoint(A) if M is None else M
        if self.M.algebra is not A and self.M.algebra.dim != A.dim:
            raise DimensionError("bimodule is over an algebra of a different dimension")
        self.limits = limits
        limits.check_dims(A.dim, self.M.dim)
        self._lock = threading.Lock()
        self._bases: dict[int, CochainSpace] = {}
        self._delta: dict[tuple[int, int], np.ndarray] = {}
        self._cdelta: dict[int, np.ndarray] = {}

    @property
    def dimA(self) -> int:
        return self.A.dim

    @property
    def dimM(self) -> int:
        return self.M.dim

    def ambient(self, n: int) -> int:
        return self.dimM * self.dimA ** n

    def space(self, n: int) -> CochainSpace:
        with self._lock:
            sp = self._bases.get(n)
        if sp is None:
            sp = _cochain_space(self.A.alpha, self.M.beta, n, self.limits)
            with self._lock:
                sp = self._bases.setdefault(n, sp)
        return sp

    def delta(self, which: int, f: MultilinearMap, check: bool = False) -> MultilinearMap:
        return hochschild_delta(which, self.A, self.M, f, check=check)

    def delta_matrix(self, which: int, n: int) -> np.ndarray:
        """Columns: ``^which delta`` of each basis element of ``C^n``, ambient coordinates."""
        key = (which, n)
        with self._lock:
            mat = self._delta.get(key)
        if mat is None:
            self.limits.check_cells(self.dimA, self.dimM, n + 1)
            cols = [self.delta(which, b).flat() for b in self.space(n).basis]
            mat = el.columns_to_matrix(cols, self.ambient(n + 1))
            with self._lock:
                mat = self._delta.setdefault(key, mat)
        return mat

    def compatible_matrix(self, n: int) -> np.ndarray:
        """Matrix of ``delta^{n,c}`` from basis coordinates of ``C^{n,c}`` to ambient ``C^{n+1,c}``."""
        with self._lock:
            mat = self._cdelta.get(n)
        if mat is None:
            d1, d2 = self.delta_matrix(1, n), self.delta_matrix(2, n)
            k = self.space(n).dim
            amb = self.ambient(n + 1)
            mat = el.zeros((n + 1) * amb, n * k)
            for s in range(n):
                mat[s * amb:(s + 1) * amb, s * k:(s + 1) * k] = d1
                mat[(s + 1) * amb:(s + 2) * amb, s * k:(s + 1) * k] = d2
            with self._lock:
                mat = self._cdelta.setdefault(n, mat)
        return mat

    def compatible_basis(self, n: int) -> list[CompatibleCochain]:
        """Basis of ``C^{n,c}`` in the order used by :meth:`compatible_matrix`."""
        sp = self.space(n)
        zero = MultilinearMap.zero((self.dimA,) * n, self.dimM)
        out = []
        for s in range(n):
            for b in sp.basis:
                parts = [zero] * n
                parts[s] = b
                out.append(CompatibleCochain(tuple(parts)))
        return out

    def coordinates(self, c: CompatibleCochain) -> np.ndarray:
        """Coordinates of ``c`` in :meth:`compatible_basis`; raises if ``c`` is outside ``C^{n,c}``."""
        n = c.degree
        B = self.space(n).basis_matrix()
        coords = []
        for p in c.parts:
            x = el.solve(B, p.flat()) if B.shape[1] else (el.zeros(0) if p.is_zero() else None)
            if x is None:
                raise NotEquivariantError("cochain part lies outside C^n_{alpha,beta}")
            coords.append(x)
        return np.concatenate(coords) if coords else el.zeros(0)

    def from_coordinates(self, coords, n: int) -> CompatibleCochain:
        basis = self.compatible_basis(n)
        out = CompatibleCochain.zero(n, self.dimA, self.dimM)
        for x, b in zip(coords, basis):
            if x != 0:
                out = out + b * x
        return out

    def compatible_delta(self, c: CompatibleCochain, check: bool = True) -> CompatibleCochain:
        return compatible_delta(self.A, self.M, c, check=check)

    def cohomology(self, n: int) -> CohomologyReport:
        if n < 1:
            raise ValueError("cohomology degree must be at least 1")
        self.limits.check_degree(n)
        dim_c = n * self.space(n).dim
        dim_z = dim_c - el.rank(self.compatible_matrix(n))
        dim_b = 0 if n == 1 else el.rank(self.compatible_matrix(n - 1))
        return CohomologyReport(n, dim_c, dim_z, dim_b)

    def cocycle_basis(self, n: int) -> list[CompatibleCochain]:
        return [self.from_coordinates(v, n) for v in el.kernel_basis(self.compatible_matrix(n))]

    def coboundary_solve(self, target: CompatibleCochain) -> CompatibleCochain | None:
        """Some ``g in C^{n-1,c}`` with ``delta g = target``, or None."""
        n = target.degree
        if n < 2:
            return None
        x = el.solve(self.compatible_matrix(n - 1), target.flat())
        if x is None:
            return None
        return self.from_coordinates(x, n - 1)

    def is_coboundary(self, target: CompatibleCochain) -> bool:
        if target.is_zero():
            return True
        return self.coboundary_solve(target) is not None

    def cohomology_representatives(self, n: int) -> list[CompatibleCochain]:
        """Cocycles whose classes form a basis of ``H^{n,c}``."""
        Z = el.kernel_basis(self.compatible_matrix(n))
        amb = self.compatible_matrix(n).shape[1]
        if n == 1:
            chosen = Z
        else:
            # coboundaries in basis coordinates of C^{n,c}
            D = self.compatible_matrix(n - 1)
            B = []
            basis_mat = self._compatible_basis_matrix(n)
            for col in el.column_space_basis(D):
                B.append(el.solve(basis_mat, col))
            chosen = el.extend_to_complement(B, Z, amb)
        return [self.from_coordinates(v, n) for v in chosen]

    def _compatible_basis_matrix(self, n: int) -> np.ndarray:
        return el.columns_to_matrix([c.flat() for c in self.compatible_basis(n)],
                                    n * self.ambient(n))


def cohomology(A: CompatibleHomAlgebra, M: CompatibleBimodule | None, n: int,
               limits: Limits = DEFAULT_LIMITS) -> CohomologyReport:
    return CochainComplex(A, M, limits).cohomology(n)


def check_mc_agrees(A: CompatibleHomAlgebra) -> bool:
    """Convenience: axiom check and Maurer-Cartan check give the same verdict."""
    return check_compatible(A).ok == check_maurer_cartan_pair(A.alpha, A.mu1, A.mu2).ok


def plus_structures(A: CompatibleHomAlgebra, M: CompatibleBimodule):
    """``A+ = (A, mu1 + mu2, alpha)`` and ``M+`` as single-product structures."""
    bm = sum_bimodule(M)
    return bm.algebra, bm
