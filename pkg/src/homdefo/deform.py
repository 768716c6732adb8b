"""Truncated one-parameter formal deformations.

A deformation of order ``n`` is stored by its jets ``mu_{s,1..n}`` and
``alpha_{1..n}``; index 0 is the base structure.  Obstructions, extension
and the triviality reduction only run in constant-twist mode (all alpha
jets zero).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactlin as el
from .cochain import (CochainComplex, CompatibleCochain, ResourceLimitError,
                      gerstenhaber_bracket, is_equivariant)
from .exactlin import DimensionError
from .homalg import CompatibleHomAlgebra, MultilinearMap

MAX_ORDER = 6


class DeformationError(ValueError):
    pass


class UnsupportedModeError(DeformationError):
    """Operation needs constant twist but the deformation has alpha jets."""


@dataclass(eq=False)
class TruncatedDeformation:
    base: CompatibleHomAlgebra
    mu1_jets: list
    mu2_jets: list
    alpha_jets: list = None

    def __post_init__(self):
        n = len(self.mu1_jets)
        if len(self.mu2_jets) != n:
            raise DimensionError("mu1 and mu2 jet lists must have the same length")
        if n > MAX_ORDER:
            raise ResourceLimitError(f"truncation order {n} exceeds the cap {MAX_ORDER}")
        d = self.base.dim
        if self.alpha_jets is None:
            self.alpha_jets = [el.zeros(d, d) for _ in range(n)]
        if len(self.alpha_jets) != n:
            raise DimensionError("alpha jets must have one entry per order")
        self.alpha_jets = [el.as_matrix(a) for a in self.alpha_jets]
        self.mu1_jets = [j if isinstance(j, MultilinearMap) else MultilinearMap(j)
                         for j in self.mu1_jets]
        self.mu2_jets = [j if isinstance(j, MultilinearMap) else MultilinearMap(j)
                         for j in self.mu2_jets]
        for j in self.mu1_jets + self.mu2_jets:
            if j.coeffs.shape != (d, d, d):
                raise DimensionError("jets must be bilinear maps on the base space")
            if not is_equivariant(j, self.base.alpha, self.base.alpha):
                raise DeformationError("jets must lie in C^2_alpha (commute with the base twist)")
        for a in self.alpha_jets:
            if a.shape != (d, d):
                raise DimensionError("alpha jets must be square matrices of the base dimension")

    @classmethod
    def trivial(cls, base: CompatibleHomAlgebra, order: int) -> "TruncatedDeformation":
        z = MultilinearMap.zero((base.dim, base.dim), base.dim)
        return cls(base, [z] * order, [z] * order)

    @property
    def order(self) -> int:
        return len(self.mu1_jets)

    def mu(self, s: int, i: int) -> MultilinearMap:
        if i == 0:
            return self.base.product(s)
        jets = self.mu1_jets if s == 1 else self.mu2_jets
        if i <= len(jets):
            return jets[i - 1]
        return MultilinearMap.zero((self.base.dim,) * 2, self.base.dim)

    def alpha(self, i: int) -> np.ndarray:
        if i == 0:
            return self.base.alpha
        if i <= len(self.alpha_jets):
            return self.alpha_jets[i - 1]
        return el.zeros(self.base.dim, self.base.dim)

    def constant_twist(self) -> bool:
        return all(el.is_zero(a) for a in self.alpha_jets)

    def extended(self, x1: MultilinearMap, x2: MultilinearMap, alpha_next=None) -> "TruncatedDeformation":
        d = self.base.dim
        a = el.zeros(d, d) if alpha_next is None else alpha_next
        return TruncatedDeformation(self.base, self.mu1_jets + [x1], self.mu2_jets + [x2],
                                    self.alpha_jets + [a])


@dataclass
class DeformationReport:
    ok_per_order: list
    defects: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.ok_per_order)

    def to_json(self) -> dict:
        return {"ok": self.ok, "ok_per_order": self.ok_per_order,
                "defects": [{"order": m, "identity": name,
                             "entries": [[*idx, str(x)] for idx, x in t.nonzero_entries()]}
                            for (m, name), t in self.defects.items()]}


def _triples(m: int):
    for i in range(m + 1):
        for j in range(m + 1 - i):
            yield i, j, m - i - j


def order_residuals(d: TruncatedDeformation, m: int) -> dict:
    """Coefficient of ``t^m`` in each defining identity (lhs - rhs)."""
    dim = d.base.dim
    zero3 = MultilinearMap.zero((dim,) * 3, dim)
    out = {}
    for s in (1, 2):
        r = zero3
        for i, j, k in _triples(m):
            r = r + d.mu(s, i).precompose([None, d.alpha(k)]).insert(0, d.mu(s, j))
            r = r - d.mu(s, i).precompose([d.alpha(j), None]).insert(1, d.mu(s, k))
        out[f"hom-associativity {s}"] = r
    r = zero3
    for i, j, k in _triples(m):
        r = r + d.mu(2, i).precompose([None, d.alpha(k)]).insert(0, d.mu(1, j))
        r = r + d.mu(1, i).precompose([None, d.alpha(k)]).insert(0, d.mu(2, j))
        r = r - d.mu(1, i).precompose([d.alpha(j), None]).insert(1, d.mu(2, k))
        r = r - d.mu(2, i).precompose([d.alpha(j), None]).insert(1, d.mu(1, k))
    out["compatibility"] = r
    zero2 = MultilinearMap.zero((dim,) * 2, dim)
    for s in (1, 2):
        r = zero2
        for i in range(m + 1):
            r = r + d.mu(s, m - i).postcompose(d.alpha(i))
        for i, j, k in _triples(m):
            r = r - d.mu(s, i).precompose([d.alpha(j), d.alpha(k)])
        out[f"multiplicativity {s}"] = r
    return out


def verify_deformation(d: TruncatedDeformation) -> DeformationReport:
    ok, defects = [], {}
    for m in range(d.order + 1):
        good = True
        for name, t in order_residuals(d, m).items():
            if not t.is_zero():
                good = False
                defects[(m, name)] = t
        ok.append(good)
    return DeformationReport(ok, defects)


def infinitesimal(d: TruncatedDeformation):
    """``(k, (mu_{1,k}, mu_{2,k}))`` for the first nonzero jet pair, else None."""
    for k in range(1, d.order + 1):
        a, b = d.mu(1, k), d.mu(2, k)
        if not (a.is_zero() and b.is_zero()):
            return k, (a, b)
    return None


@dataclass
class CocycleReport:
    ok: bool | None
    index: int | None
    residual: CompatibleCochain | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "index": self.index, "notes": self.notes,
                "residual": None if self.residual is None else
                [[[*idx, str(x)] for idx, x in p.nonzero_entries()] for p in self.residual.parts]}


def check_infinitesimal_cocycle(d: TruncatedDeformation,
                                complex_: CochainComplex | None = None) -> CocycleReport:
    """Is the infinitesimal a ``delta^{2,c}`` cocycle?

    With a nonzero ``alpha_j`` for some ``j <= k`` the answer is reported as
    indeterminate (``ok=None``) alongside the raw residual.
    """
    inf = infinitesimal(d)
    if inf is None:
        return CocycleReport(True, None, notes=["no nonzero jets; vacuously a cocycle"])
    k, pair = inf
    cx = complex_ or CochainComplex(d.base)
    residual = cx.compatible_delta(CompatibleCochain(pair), check=False)
    if any(not el.is_zero(d.alpha(j)) for j in range(1, k + 1)):
        return CocycleReport(None, k, residual,
                             ["indeterminate: nonzero alpha jets at or below the infinitesimal order"])
    return CocycleReport(residual.is_zero(), k, residual)


@dataclass(eq=False)
class FormalIsomorphismJet:
    """``Psi_t = id + psi_1 t + ... + psi_n t^n``."""

    psi_jets: list

    def __post_init__(self):
        self.psi_jets = [el.as_matrix(p) for p in self.psi_jets]

    @property
    def order(self) -> int:
        return len(self.psi_jets)

    def psi(self, i: int, dim: int) -> np.ndarray:
        if i == 0:
            return el.identity(dim)
        if i <= len(self.psi_jets):
            return self.psi_jets[i - 1]
        return el.zeros(dim, dim)

    def inverse_jets(self, dim: int, order: int) -> list:
        """Coefficients ``chi_0..chi_order`` of ``Psi_t^{-1}``."""
        chi = [el.identity(dim)]
        for m in range(1, order + 1):
            acc = el.zeros(dim, dim)
            for i in range(1, m + 1):
                acc = acc - self.psi(i, dim) @ chi[m - i]
            chi.append(acc)
        return chi

    def inverse(self, dim: int) -> "FormalIsomorphismJet":
        return FormalIsomorphismJet(self.inverse_jets(dim, self.order)[1:])


def apply_isomorphism(d: TruncatedDeformation, psi: FormalIsomorphismJet) -> TruncatedDeformation:
    """Push ``d`` forward to ``Psi^{-1} o mu_t o (Psi x Psi)`` modulo ``t^{n+1}``."""
    n, dim = d.order, d.base.dim
    if psi.order > n:
        raise DimensionError("isomorphism jet is longer than the deformation")
    for m in range(1, n + 1):
        c = el.zeros(dim, dim)
        for i in range(m + 1):
            c = c + d.alpha(i) @ psi.psi(m - i, dim) - psi.psi(i, dim) @ d.alpha(m - i)
        if not el.is_zero(c):
            raise DeformationError(f"Psi_t does not commute with alpha_t at order {m}")
    chi = psi.inverse_jets(dim, n)
    new = {}
    for s in (1, 2):
        # inner[p] = coefficient of t^p in mu_t(Psi a, Psi b)
        inner = []
        for p in range(n + 1):
            acc = MultilinearMap.zero((dim, dim), dim)
            for b, c, e in _triples(p):
                acc = acc + d.mu(s, b).precompose([psi.psi(c, dim), psi.psi(e, dim)])
            inner.append(acc)
        jets = []
        for m in range(1, n + 1):
            acc = MultilinearMap.zero((dim, dim), dim)
            for a in range(m + 1):
                acc = acc + inner[m - a].postcompose(chi[a])
            jets.append(acc)
        new[s] = jets
    return TruncatedDeformation(d.base, new[1], new[2], [a.copy() for a in d.alpha_jets])


@dataclass
class EquivalenceReport:
    ok: bool
    index: int | None
    witness: CompatibleCochain | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "index": self.index,
                "witness": None if self.witness is None else
                [[[*idx, str(x)] for idx, x in p.nonzero_entries()] for p in self.witness.parts]}


def _same_base(a: CompatibleHomAlgebra, b: CompatibleHomAlgebra) -> bool:
    return a is b or (a.mu1 == b.mu1 and a.mu2 == b.mu2 and bool(np.all(a.alpha == b.alpha)))


def cohomologous_check(d1: TruncatedDeformation, d2: TruncatedDeformation,
                       complex_: CochainComplex | None = None) -> EquivalenceReport:
    """Do the leading infinitesimals differ by a ``delta^{1,c}`` coboundary?

    Both are compared at the smaller of the two infinitesimal indices.
    """
    if not _same_base(d1.base, d2.base):
        raise DeformationError("deformations have different base algebras")
    i1, i2 = infinitesimal(d1), infinitesimal(d2)
    if i1 is None and i2 is None:
        return EquivalenceReport(True, None)
    k = min(x[0] for x in (i1, i2) if x is not None)
    diff = CompatibleCochain((d1.mu(1, k) - d2.mu(1, k), d1.mu(2, k) - d2.mu(2, k)))
    if diff.is_zero():
        return EquivalenceReport(True, k, CompatibleCochain.zero(1, d1.base.dim, d1.base.dim))
    cx = complex_ or CochainComplex(d1.base)
    g = cx.coboundary_solve(diff)
    return EquivalenceReport(g is not None, k, g)


@dataclass(eq=False)
class Obstruction:
    order: int
    cochain: CompatibleCochain

    @property
    def parts(self) -> tuple:
        return self.cochain.parts

    def is_zero(self) -> bool:
        return self.cochain.is_zero()


def _require_constant(d: TruncatedDeformation):
    if not d.constant_twist():
        raise UnsupportedModeError("this operation requires constant twist (all alpha jets zero)")


def obstruction(d: TruncatedDeformation) -> Obstruction:
    """``(1/2 sum [mu1_i, mu1_j], sum [mu1_i, mu2_j], 1/2 sum [mu2_i, mu2_j])`` over ``i + j = n + 1``."""
    _require_constant(d)
    n, dim, al = d.order, d.base.dim, d.base.alpha
    half = el.scalar("1/2")
    zero = MultilinearMap.zero((dim,) * 3, dim)
    o1, o12, o2 = zero, zero, zero
    for i in range(1, n + 1):
        j = n + 1 - i
        if not 1 <= j <= n:
            continue
        o1 = o1 + gerstenhaber_bracket(al, d.mu(1, i), d.mu(1, j), check=False) * half
        o2 = o2 + gerstenhaber_bracket(al, d.mu(2, i), d.mu(2, j), check=False) * half
        o12 = o12 + gerstenhaber_bracket(al, d.mu(1, i), d.mu(2, j), check=False)
    return Obstruction(n, CompatibleCochain((o1, o12, o2)))


def try_extend(d: TruncatedDeformation, complex_: CochainComplex | None = None):
    """Jets ``(mu_{1,n+1}, mu_{2,n+1})`` with ``delta^{2,c}`` of them equal to the obstruction.

    Returns None when the obstruction class is nonzero.  ``alpha_{n+1}`` is
    taken to be zero.
    """
    _require_constant(d)
    cx = complex_ or CochainComplex(d.base)
    obs = obstruction(d)
    if obs.is_zero():
        dim = d.base.dim
        z = MultilinearMap.zero((dim, dim), dim)
        return z, z
    sol = cx.coboundary_solve(obs.cochain)
    if sol is None:
        return None
    return sol.parts


@dataclass
class TrivialityReport:
    trivial: bool
    reduced: TruncatedDeformation
    steps: list = field(default_factory=list)

    @property
    def index(self):
        inf = infinitesimal(self.reduced)
        return None if inf is None else inf[0]


def triviality_reduction(d: TruncatedDeformation,
                         complex_: CochainComplex | None = None) -> TrivialityReport:
    """Kill coboundary infinitesimals one order at a time."""
    _require_constant(d)
    cx = complex_ or CochainComplex(d.base)
    steps = []
    current = d
    while True:
        inf = infinitesimal(current)
        if inf is None:
            return TrivialityReport(True, current, steps)
        k, pair = inf
        phi = cx.coboundary_solve(-CompatibleCochain(pair))
        if phi is None:
            return TrivialityReport(False, current, steps)
        psi = [el.zeros(d.base.dim, d.base.dim) for _ in range(k)]
        psi[k - 1] = phi.parts[0].to_matrix()
        current = apply_isomorphism(current, FormalIsomorphismJet(psi))
        steps.append((k, psi[k - 1]))
        if len(steps) > d.order:
            raise DeformationError("reduction did not terminate")
