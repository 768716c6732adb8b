"""Abelian extensions ``0 -> M -> E -> A -> 0`` in normalized coordinates.

``E = M + A`` with M coordinates first; ``incl``, ``proj`` and ``section``
are matrices.  Equivalences are searched among maps ``(m, a) -> (m + g(a), a)``,
which turns equivalence into a linear solvability question in ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactlin as el
from .bimod import CompatibleBimodule
from .cochain import DEFAULT_LIMITS, CochainComplex, CompatibleCochain, Limits, is_equivariant
from .exactlin import DimensionError
from .homalg import (CheckReport, CompatibleHomAlgebra, InvalidStructureError,
                     MultilinearMap, Violation, check_compatible, unit)


class ExtensionError(ValueError):
    pass


def standard_maps(dimM: int, dimA: int):
    n = dimM + dimA
    incl = el.zeros(n, dimM)
    proj = el.zeros(dimA, n)
    section = el.zeros(n, dimA)
    for i in range(dimM):
        incl[i, i] = el.ONE
    for a in range(dimA):
        proj[a, dimM + a] = el.ONE
        section[dimM + a, a] = el.ONE
    return incl, proj, section


@dataclass(eq=False)
class AbelianExtension:
    base: CompatibleHomAlgebra
    module: CompatibleBimodule
    total: CompatibleHomAlgebra
    incl: np.ndarray
    proj: np.ndarray
    section: np.ndarray

    def __post_init__(self):
        self.incl = el.as_matrix(self.incl)
        self.proj = el.as_matrix(self.proj)
        self.section = el.as_matrix(self.section)
        n = self.total.dim
        dM, dA = self.module.dim, self.base.dim
        if self.incl.shape != (n, dM) or self.proj.shape != (dA, n) or self.section.shape != (n, dA):
            raise DimensionError("extension maps have inconsistent shapes")

    def report(self) -> CheckReport:
        """Exactness, abelian kernel, splitting, and validity of ``E``."""
        viol = []
        n, dM, dA = self.total.dim, self.module.dim, self.base.dim
        i, j, s = self.incl, self.proj, self.section

        def mat_viol(name, m):
            for idx, x in np.ndenumerate(m):
                if x != 0:
                    viol.append(Violation(name, idx, (x,)))
        mat_viol("proj o incl = 0", j @ i)
        mat_viol("proj o section = id", j @ s - el.identity(dA))
        if el.rank(i) != dM:
            viol.append(Violation("incl injective", (), ()))
        if el.rank(j) != dA:
            viol.append(Violation("proj surjective", (), ()))
        if dM + dA != n:
            viol.append(Violation("image(incl) = kernel(proj)", (), ()))
        for w in (1, 2):
            mu = self.total.product(w)
            for a in range(dM):
                for b in range(dM):
                    v = mu(i[:, a], i[:, b])
                    if not el.is_zero(v):
                        viol.append(Violation(f"M squares to zero [{w}]", (a, b), tuple(v)))
        mat_viol("alpha_E o section = section o alpha",
                 self.total.alpha @ s - s @ self.base.alpha)
        mat_viol("alpha_E o incl = incl o beta", self.total.alpha @ i - i @ self.module.beta)
        for w in (1, 2):
            mat_viol(f"proj is multiplicative [{w}]",
                     np.array([[x for x in (j @ self.total.product(w)(unit(n, p), unit(n, q))
                                            - self.base.product(w)(j[:, p], j[:, q]))]
                               for p in range(n) for q in range(n)], dtype=object))
        rep = check_compatible(self.total)
        viol += rep.violations
        return CheckReport(ok=not viol, violations=viol)


def _check_pair(cx: CochainComplex, f: CompatibleCochain):
    if f.degree != 2:
        raise DimensionError("extension cocycles have degree 2")
    for p in f.parts:
        if p.coeffs.shape != (cx.dimA, cx.dimA, cx.dimM):
            raise DimensionError("cocycle parts must be bilinear maps A x A -> M")
        if not is_equivariant(p, cx.A.alpha, cx.M.beta):
            raise ExtensionError("cocycle part is not in C^2_{alpha,beta}")


def extension_from_cocycle(A: CompatibleHomAlgebra, M: CompatibleBimodule,
                           f: CompatibleCochain) -> AbelianExtension:
    """``mu^E_i((m,a),(n,b)) = (r_i(m,b) + l_i(a,n) + f_i(a,b), mu_i(a,b))``."""
    cx = CochainComplex(A, M)
    _check_pair(cx, f)
    df = cx.compatible_delta(f, check=False)
    if not df.is_zero():
        err = ExtensionError("f is not a 2-cocycle of the compatible complex")
        err.defect = df
        raise err
    return _build(A, M, f)


def _build(A, M, f: CompatibleCochain) -> AbelianExtension:
    dA, dM = A.dim, M.dim
    n = dA + dM
    prods = []
    for w in (1, 2):
        l, r = M.actions(w)
        c = el.zeros(n, n, n)
        c[:dM, dM:, :dM] = r.coeffs
        c[dM:, :dM, :dM] = l.coeffs
        c[dM:, dM:, :dM] = f.parts[w - 1].coeffs
        c[dM:, dM:, dM:] = A.product(w).coeffs
        prods.append(MultilinearMap(c))
    tw = el.zeros(n, n)
    tw[:dM, :dM] = M.beta
    tw[dM:, dM:] = A.alpha
    total = CompatibleHomAlgebra(prods[0], prods[1], tw, check=False)
    incl, proj, section = standard_maps(dM, dA)
    return AbelianExtension(A, M, total, incl, proj, section)


def _m_component(e: AbelianExtension, v) -> np.ndarray:
    """``i^{-1}`` of a vector in ``ker(proj)``."""
    x = el.solve(e.incl, v)
    if x is None:
        raise ExtensionError("vector does not lie in the image of the inclusion")
    return x


def induced_bimodule(e: AbelianExtension) -> CompatibleBimodule:
    """Actions ``l_i(a, m) = mu^E_i(s(a), i(m))`` and ``r_i(m, a) = mu^E_i(i(m), s(a))``."""
    dA, dM = e.base.dim, e.module.dim
    s, inc = e.section, e.incl
    acts = []
    for w in (1, 2):
        mu = e.total.product(w)
        l = MultilinearMap.from_function((dA, dM), dM,
                                         lambda a, m: _m_component(e, mu(s[:, a], inc[:, m])))
        r = MultilinearMap.from_function((dM, dA), dM,
                                         lambda m, a: _m_component(e, mu(inc[:, m], s[:, a])))
        acts += [l, r]
    return CompatibleBimodule(e.base, acts[0], acts[1], acts[2], acts[3], e.module.beta, check=False)


def cocycle_from_extension(e: AbelianExtension) -> CompatibleCochain:
    """``f_i(a, b) = i^{-1}(mu^E_i(s a, s b) - s(mu_i(a, b)))``."""
    ind = induced_bimodule(e)
    M = e.module
    for name in ("l1", "r1", "l2", "r2"):
        if not getattr(ind, name) == getattr(M, name):
            raise ExtensionError(f"induced action {name} differs from the declared bimodule")
    dA, dM = e.base.dim, M.dim
    s = e.section
    parts = []
    for w in (1, 2):
        mu, base_mu = e.total.product(w), e.base.product(w)
        parts.append(MultilinearMap.from_function(
            (dA, dA), dM,
            lambda a, b: _m_component(e, mu(s[:, a], s[:, b]) - s @ base_mu(unit(dA, a), unit(dA, b)))))
    return CompatibleCochain(tuple(parts))


def with_section(e: AbelianExtension, g) -> AbelianExtension:
    """Same extension with section ``s'(a) = s(a) + i(g(a))``."""
    g = el.as_matrix(g)
    return AbelianExtension(e.base, e.module, e.total, e.incl, e.proj, e.section + e.incl @ g)


@dataclass
class ExtensionEquivalence:
    ok: bool
    g: np.ndarray | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "g": None if self.g is None else [[str(x) for x in row] for row in self.g]}


def _normalized(e: AbelianExtension) -> bool:
    inc, proj, sec = standard_maps(e.module.dim, e.base.dim)
    return (bool(np.all(e.incl == inc)) and bool(np.all(e.proj == proj))
            and bool(np.all(e.section == sec)))


def equivalent_extensions(e1: AbelianExtension, e2: AbelianExtension) -> ExtensionEquivalence:
    """Search ``phi(m, a) = (m + g(a), a)`` that is a morphism ``E1 -> E2`` of compatible algebras."""
    dA, dM = e1.base.dim, e1.module.dim
    if (e2.base.dim, e2.module.dim) != (dA, dM) or not bool(np.all(e1.module.beta == e2.module.beta)):
        raise ExtensionError("extensions have different ends")
    if not (_normalized(e1) and _normalized(e2)):
        raise ExtensionError("extensions must be in normalized coordinates E = M + A")
    n = dA + dM

    def phi(g):
        m = el.identity(n)
        m[:dM, dM:] = g
        return m

    def residual(g) -> np.ndarray:
        p = phi(g)
        parts = []
        for w in (1, 2):
            mu1, mu2 = e1.total.product(w), e2.total.product(w)
            lhs = mu1.postcompose(p)
            rhs = mu2.precompose([p, p])
            parts.append((lhs - rhs).flat())
        parts.append((p @ e1.total.alpha - e2.total.alpha @ p).reshape(-1))
        return np.concatenate(parts)

    r0 = residual(el.zeros(dM, dA))
    cols = []
    for idx in range(dM * dA):
        g = el.zeros(dM, dA)
        g[idx // dA, idx % dA] = el.ONE
        cols.append(residual(g) - r0)
    mat = el.columns_to_matrix(cols, r0.shape[0])
    x = el.solve(mat, -r0)
    if x is None:
        return ExtensionEquivalence(False)
    g = x.reshape(dM, dA)
    if not el.is_zero(residual(g)):
        return ExtensionEquivalence(False)
    return ExtensionEquivalence(True, g)


@dataclass
class ExtClassesReport:
    dim_H2c: int
    representative_cocycles: list = field(default_factory=list)


def ext_classes(A: CompatibleHomAlgebra, M: CompatibleBimodule | None = None,
                limits: Limits = DEFAULT_LIMITS) -> ExtClassesReport:
    cx = CochainComplex(A, M, limits)
    rep = cx.cohomology(2)
    reps = cx.cohomology_representatives(2)
    if len(reps) != rep.dim_H:
        raise ArithmeticError("representative count disagrees with dim H^{2,c}")
    return ExtClassesReport(rep.dim_H, reps)
