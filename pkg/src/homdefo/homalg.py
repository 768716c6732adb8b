"""Multilinear maps and (compatible) Hom-associative algebras.

Every structure is stored by structure constants in the standard basis
``e_0, ..., e_{d-1}``.  A linear map is a square matrix acting on column
vectors, so ``alpha[:, i]`` is the image of ``e_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, InitVar
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import exactlin as el
from .exactlin import DimensionError


class InvalidStructureError(ValueError):
    """A structure failed one of its defining identities."""

    def __init__(self, message: str, report: "CheckReport | None" = None):
        super().__init__(message)
        self.report = report


class MultilinearMap:
    """An n-linear map ``V_1 x ... x V_n -> W`` stored as a dense tensor.

    ``coeffs[i_1, ..., i_n, k]`` is the coefficient of ``e_k`` in
    ``f(e_{i_1}, ..., e_{i_n})``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.asarray(coeffs, dtype=object)
        if arr.ndim < 2:
            raise DimensionError("a multilinear map needs at least one input slot")
        self.coeffs = arr

    @classmethod
    def zero(cls, domain_dims: Sequence[int], codomain_dim: int) -> "MultilinearMap":
        return cls(el.zeros(*domain_dims, codomain_dim))

    @classmethod
    def from_entries(cls, domain_dims: Sequence[int], codomain_dim: int,
                     entries: Iterable[Sequence]) -> "MultilinearMap":
        """Build from sparse ``(i_1, ..., i_n, k, c)`` entries; repeats add up."""
        out = el.zeros(*domain_dims, codomain_dim)
        n = len(domain_dims)
        for entry in entries:
            entry = list(entry)
            if len(entry) != n + 2:
                raise DimensionError(f"entry {entry} should have {n + 2} components")
            idx = tuple(int(x) for x in entry[:-1])
            for pos, (i, d) in enumerate(zip(idx, list(domain_dims) + [codomain_dim])):
                if not 0 <= i < d:
                    raise IndexError(f"index {i} at position {pos} out of range 0..{d - 1}")
            out[idx] += el.scalar(entry[-1])
        return cls(out)

    @classmethod
    def from_function(cls, domain_dims: Sequence[int], codomain_dim: int,
                      fn: Callable[..., np.ndarray]) -> "MultilinearMap":
        """Tabulate ``fn(i_1, ..., i_n)`` (a codomain vector) on basis indices."""
        out = el.zeros(*domain_dims, codomain_dim)
        for idx in itertools.product(*(range(d) for d in domain_dims)):
            out[idx] = fn(*idx)
        return cls(out)

    @classmethod
    def from_matrix(cls, m) -> "MultilinearMap":
        m = el.as_matrix(m)
        return cls(m.T.copy())

    @classmethod
    def from_flat(cls, vec, domain_dims: Sequence[int], codomain_dim: int) -> "MultilinearMap":
        return cls(np.asarray(vec, dtype=object).reshape(*domain_dims, codomain_dim).copy())

    @property
    def arity(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def domain_dims(self) -> tuple[int, ...]:
        return self.coeffs.shape[:-1]

    @property
    def codomain_dim(self) -> int:
        return self.coeffs.shape[-1]

    def to_matrix(self) -> np.ndarray:
        if self.arity != 1:
            raise DimensionError("only unary maps convert to matrices")
        return self.coeffs.T.copy()

    def flat(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def __call__(self, *vectors) -> np.ndarray:
        if len(vectors) != self.arity:
            raise DimensionError(f"expected {self.arity} arguments, got {len(vectors)}")
        out = self.coeffs
        for v in vectors:
            out = np.tensordot(np.asarray(v, dtype=object), out, axes=([0], [0]))
        return out

    def precompose(self, maps: Sequence) -> "MultilinearMap":
        """``f(P_1 x_1, ..., P_n x_n)``; a ``None`` entry leaves that slot alone."""
        if len(maps) != self.arity:
            raise DimensionError("one map per input slot is required")
        out = self.coeffs
        for s, p in enumerate(maps):
            if p is None:
                continue
            out = np.moveaxis(np.tensordot(out, p, axes=([s], [0])), -1, s)
        return MultilinearMap(out)

    def precompose_all(self, p) -> "MultilinearMap":
        return self.precompose([p] * self.arity)

    def postcompose(self, m) -> "MultilinearMap":
        """``m(f(x_1, ..., x_n))``."""
        return MultilinearMap(np.tensordot(self.coeffs, m, axes=([self.arity], [1])))

    def insert(self, slot: int, g: "MultilinearMap") -> "MultilinearMap":
        """Substitute the output of ``g`` into input ``slot``.

        The result has arity ``arity + g.arity - 1`` with ``g``'s inputs
        occupying positions ``slot, ..., slot + g.arity - 1``.
        """
        if g.codomain_dim != self.domain_dims[slot]:
            raise DimensionError("codomain of inserted map does not match the slot")
        q = g.arity
        res = np.tensordot(g.coeffs, self.coeffs, axes=([q], [slot]))
        res = np.moveaxis(res, list(range(q)), list(range(slot, slot + q)))
        return MultilinearMap(res)

    def permute_inputs(self, perm: Sequence[int]) -> "MultilinearMap":
        """``x -> f(x_{perm[0]}, ..., x_{perm[n-1]})``."""
        inv = [0] * len(perm)
        for pos, p in enumerate(perm):
            inv[p] = pos
        # result[i_0..i_{n-1}] = f[i_perm0, ...]: axis k of f gets index i_{perm[k]}
        return MultilinearMap(np.transpose(self.coeffs, list(inv) + [self.arity]))

    def is_zero(self) -> bool:
        return el.is_zero(self.coeffs)

    def nonzero_entries(self):
        for idx, x in np.ndenumerate(self.coeffs):
            if x != 0:
                yield idx, x

    def _check_same(self, other):
        if not isinstance(other, MultilinearMap) or other.coeffs.shape != self.coeffs.shape:
            raise DimensionError("multilinear maps have different shapes")

    def __add__(self, other):
        self._check_same(other)
        return MultilinearMap(self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_same(other)
        return MultilinearMap(self.coeffs - other.coeffs)

    def __neg__(self):
        return MultilinearMap(-self.coeffs)

    def __mul__(self, c):
        return MultilinearMap(self.coeffs * el.scalar(c))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultilinearMap):
            return NotImplemented
        return other.coeffs.shape == self.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    __hash__ = None

    def __repr__(self):
        entries = [list(idx) + [str(x)] for idx, x in self.nonzero_entries()]
        return f"MultilinearMap(shape={self.coeffs.shape}, entries={entries})"


def bilinear(dim: int, entries: Iterable[Sequence] = ()) -> MultilinearMap:
    """A product ``A x A -> A`` from ``(i, j, k, c)`` entries."""
    return MultilinearMap.from_entries((dim, dim), dim, entries)


def unit(dim: int, i: int) -> np.ndarray:
    v = el.zeros(dim)
    v[i] = el.ONE
    return v


@dataclass(frozen=True)
class Violation:
    identity: str
    indices: tuple
    defect: tuple

    def to_json(self) -> dict:
        return {"identity": self.identity, "indices": list(self.indices),
                "defect": [str(x) for x in self.defect]}


@dataclass
class CheckReport:
    ok: bool
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def failed_identities(self) -> list[str]:
        seen = []
        for v in self.violations:
            if v.identity not in seen:
                seen.append(v.identity)
        return seen

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations],
                "notes": list(self.notes)}

    @classmethod
    def merge(cls, *reports: "CheckReport") -> "CheckReport":
        out = cls(ok=all(r.ok for r in reports))
        for r in reports:
            out.violations.extend(r.violations)
            out.notes.extend(r.notes)
        return out


def enumerate_identity(name: str, dims: Sequence[int],
                       defect: Callable[..., np.ndarray]) -> list[Violation]:
    """Evaluate ``defect`` (lhs - rhs) on every tuple of basis indices."""
    found = []
    for idx in itertools.product(*(range(d) for d in dims)):
        d = np.asarray(defect(*idx), dtype=object)
        if not el.is_zero(d):
            found.append(Violation(name, idx, tuple(d.tolist())))
    return found


def _square(m, n: int, what: str) -> np.ndarray:
    m = el.as_matrix(m)
    if m.shape != (n, n):
        raise DimensionError(f"{what} must be {n}x{n}, got {m.shape}")
    return m


def _product(mu: MultilinearMap, n: int, what: str) -> MultilinearMap:
    if not isinstance(mu, MultilinearMap):
        mu = MultilinearMap(mu)
    if mu.coeffs.shape != (n, n, n):
        raise DimensionError(f"{what} must have shape {(n, n, n)}, got {mu.coeffs.shape}")
    return mu


def check_hom_associative(dim: int, mu: MultilinearMap, alpha) -> CheckReport:
    """Multiplicativity of ``alpha`` and Hom-associativity, on all basis tuples."""
    mu = _product(mu, dim, "mu")
    alpha = _square(alpha, dim, "alpha")
    e = lambda i: unit(dim, i)
    a = lambda i: alpha[:, i]
    viol = enumerate_identity(
        "multiplicativity", (dim, dim),
        lambda i, j: alpha @ mu(e(i), e(j)) - mu(a(i), a(j)))
    viol += enumerate_identity(
        "hom-associativity", (dim, dim, dim),
        lambda i, j, k: mu(mu(e(i), e(j)), a(k)) - mu(a(i), mu(e(j), e(k))))
    return CheckReport(ok=not viol, violations=viol)


def compatibility_defect(dim, mu1, mu2, alpha):
    """Basis evaluator of lhs - rhs of the mixed compatibility identity."""
    e = lambda i: unit(dim, i)
    a = lambda i: alpha[:, i]

    def defect(i, j, k):
        lhs = mu2(mu1(e(i), e(j)), a(k)) + mu1(mu2(e(i), e(j)), a(k))
        rhs = mu1(a(i), mu2(e(j), e(k))) + mu2(a(i), mu1(e(j), e(k)))
        return lhs - rhs
    return defect


@dataclass(eq=False)
class HomAssociativeAlgebra:
    """``(A, mu, alpha)``.  Pass ``check=False`` for unverified candidates."""

    mu: MultilinearMap
    alpha: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        if not isinstance(self.mu, MultilinearMap):
            self.mu = MultilinearMap(self.mu)
        n = self.mu.codomain_dim
        self.mu = _product(self.mu, n, "mu")
        self.alpha = _square(self.alpha, n, "alpha")
        self._report = None
        if check:
            rep = self.report()
            if not rep.ok:
                raise InvalidStructureError("not a Hom-associative algebra", rep)

    @property
    def dim(self) -> int:
        return self.mu.codomain_dim

    def report(self) -> CheckReport:
        if self._report is None:
            self._report = check_hom_associative(self.dim, self.mu, self.alpha)
        return self._report

    def as_compatible(self) -> "CompatibleHomAlgebra":
        """View as a compatible algebra with zero second product."""
        return CompatibleHomAlgebra(self.mu, MultilinearMap.zero((self.dim, self.dim), self.dim),
                                    self.alpha, check=False)


@dataclass(eq=False)
class CompatibleHomAlgebra:
    """``(A, mu1, mu2, alpha)``.  Pass ``check=False`` for unverified candidates."""

    mu1: MultilinearMap
    mu2: MultilinearMap
    alpha: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        if not isinstance(self.mu1, MultilinearMap):
            self.mu1 = MultilinearMap(self.mu1)
        if not isinstance(self.mu2, MultilinearMap):
            self.mu2 = MultilinearMap(self.mu2)
        n = self.mu1.codomain_dim
        self.mu1 = _product(self.mu1, n, "mu1")
        self.mu2 = _product(self.mu2, n, "mu2")
        self.alpha = _square(self.alpha, n, "alpha")
        self._report = None
        if check:
            rep = self.report()
            if not rep.ok:
                raise InvalidStructureError("not a compatible Hom-associative algebra", rep)

    @classmethod
    def unchecked(cls, mu1, mu2, alpha) -> "CompatibleHomAlgebra":
        return cls(mu1, mu2, alpha, check=False)

    @property
    def dim(self) -> int:
        return self.mu1.codomain_dim

    def product(self, which: int) -> MultilinearMap:
        if which == 1:
            return self.mu1
        if which == 2:
            return self.mu2
        raise ValueError("which must be 1 or 2")

    def single(self, which: int) -> HomAssociativeAlgebra:
        return HomAssociativeAlgebra(self.product(which), self.alpha, check=False)

    def report(self) -> CheckReport:
        if self._report is None:
            self._report = check_compatible(self)
        return self._report

    def is_valid(self) -> bool:
        return self.report().ok


def check_compatible(algebra: CompatibleHomAlgebra) -> CheckReport:
    n, alpha = algebra.dim, algebra.alpha
    r1 = check_hom_associative(n, algebra.mu1, alpha)
    r2 = check_hom_associative(n, algebra.mu2, alpha)
    tag = lambda rep, s: [Violation(f"{v.identity} (mu{s})", v.indices, v.defect)
                          for v in rep.violations]
    viol = tag(r1, 1) + tag(r2, 2)
    viol += enumerate_identity("compatibility", (n, n, n),
                               compatibility_defect(n, algebra.mu1, algebra.mu2, alpha))
    return CheckReport(ok=not viol, violations=viol)


def check_morphism(src: CompatibleHomAlgebra, dst: CompatibleHomAlgebra, phi) -> CheckReport:
    """``phi`` intertwines both products and the twists."""
    phi = el.as_matrix(phi)
    if phi.shape != (dst.dim, src.dim):
        raise DimensionError(f"phi must be {dst.dim}x{src.dim}, got {phi.shape}")
    e = lambda i: unit(src.dim, i)
    viol = []
    for s in (1, 2):
        mu, nu = src.product(s), dst.product(s)
        viol += enumerate_identity(
            f"product {s}", (src.dim, src.dim),
            lambda i, j: phi @ mu(e(i), e(j)) - nu(phi[:, i], phi[:, j]))
    viol += enumerate_identity(
        "twist", (src.dim,), lambda i: phi @ src.alpha[:, i] - dst.alpha @ phi[:, i])
    return CheckReport(ok=not viol, violations=viol)


def linear_combination_algebra(algebra: CompatibleHomAlgebra, lam1, lam2) -> HomAssociativeAlgebra:
    if not algebra.is_valid():
        raise InvalidStructureError("input is not a compatible Hom-associative algebra",
                                    algebra.report())
    mu = algebra.mu1 * el.scalar(lam1) + algebra.mu2 * el.scalar(lam2)
    return HomAssociativeAlgebra(mu, algebra.alpha)


def sum_algebra(algebra: CompatibleHomAlgebra) -> HomAssociativeAlgebra:
    return linear_combination_algebra(algebra, 1, 1)
