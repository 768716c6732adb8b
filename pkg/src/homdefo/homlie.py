"""Compatible Hom-Lie algebras from commutators, and skew-symmetrization.

Alternating cochains are kept as full tensors; :func:`is_alternating`
checks the sign rule on every transposition of adjacent inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, InitVar

import numpy as np

from . import exactlin as el
from .bimod import CompatibleBimodule
from .cochain import CompatibleCochain, is_equivariant
from .exactlin import DimensionError
from .homalg import (CheckReport, CompatibleHomAlgebra, InvalidStructureError,
                     MultilinearMap, enumerate_identity, unit)


def commutator(mu: MultilinearMap) -> MultilinearMap:
    return mu - mu.permute_inputs([1, 0])


def is_alternating(f: MultilinearMap) -> bool:
    n = f.arity
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if not (f + f.permute_inputs(perm)).is_zero():
            return False
    # f(..., x, x, ...) = 0 follows from antisymmetry in characteristic 0
    return True


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def skew_symmetrize(f: MultilinearMap) -> MultilinearMap:
    """``sum_sigma sign(sigma) f(a_sigma(1), ..., a_sigma(n))``."""
    n = f.arity
    total = None
    for p in itertools.permutations(range(n)):
        term = f.permute_inputs(p)
        if _perm_sign(p) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def _hom_lie_violations(bracket, alpha, n, tag) -> list:
    e = lambda i: unit(n, i)
    a = lambda i: alpha[:, i]
    viol = enumerate_identity(f"antisymmetry{tag}", (n, n),
                              lambda i, j: bracket(e(i), e(j)) + bracket(e(j), e(i)))
    viol += enumerate_identity(f"multiplicativity{tag}", (n, n),
                               lambda i, j: alpha @ bracket(e(i), e(j)) - bracket(a(i), a(j)))
    viol += enumerate_identity(
        f"Hom-Jacobi{tag}", (n, n, n),
        lambda i, j, k: (bracket(a(i), bracket(e(j), e(k))) + bracket(a(j), bracket(e(k), e(i)))
                         + bracket(a(k), bracket(e(i), e(j)))))
    return viol


@dataclass(eq=False)
class CompatibleHomLieAlgebra:
    bracket1: MultilinearMap
    bracket2: MultilinearMap
    alpha: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check):
        self.alpha = el.as_matrix(self.alpha)
        if check and not self.report().ok:
            raise InvalidStructureError("not a compatible Hom-Lie algebra", self.report())

    @property
    def dim(self) -> int:
        return self.alpha.shape[0]

    def bracket(self, which: int) -> MultilinearMap:
        return self.bracket1 if which == 1 else self.bracket2

    def report(self) -> CheckReport:
        n, al = self.dim, self.alpha
        b1, b2 = self.bracket1, self.bracket2
        viol = _hom_lie_violations(b1, al, n, " [1]") + _hom_lie_violations(b2, al, n, " [2]")
        e = lambda i: unit(n, i)
        a = lambda i: al[:, i]

        def six(i, j, k):
            out = el.zeros(n)
            for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                out = out + b2(b1(e(x), e(y)), a(z)) + b1(b2(e(x), e(y)), a(z))
            return out
        viol += enumerate_identity("six-term compatibility", (n, n, n), six)
        return CheckReport(ok=not viol, violations=viol)


@dataclass(eq=False)
class CompatibleHomLieRep:
    """``rho_i`` stored as maps ``g x V -> V``."""

    lie: CompatibleHomLieAlgebra
    rho1: MultilinearMap
    rho2: MultilinearMap
    beta: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check):
        self.beta = el.as_matrix(self.beta)
        if check and not self.report().ok:
            raise InvalidStructureError("not a compatible Hom-Lie representation", self.report())

    @property
    def dim(self) -> int:
        return self.beta.shape[0]

    def rho(self, which: int) -> MultilinearMap:
        return self.rho1 if which == 1 else self.rho2

    def report(self) -> CheckReport:
        L = self.lie
        n, m = L.dim, self.dim
        al, be = L.alpha, self.beta
        e = lambda i: unit(n, i)
        v = lambda i: unit(m, i)
        a = lambda i: al[:, i]
        viol = []
        for s in (1, 2):
            br, rho = L.bracket(s), self.rho(s)
            viol += enumerate_identity(
                f"beta(rho(x)v) = rho(alpha x)beta(v) [{s}]", (n, m),
                lambda i, k: be @ rho(e(i), v(k)) - rho(a(i), be[:, k]))
            viol += enumerate_identity(
                f"rho([x,y])beta(v) = rho(alpha x)rho(y)v - rho(alpha y)rho(x)v [{s}]", (n, n, m),
                lambda i, j, k: (rho(br(e(i), e(j)), be[:, k]) - rho(a(i), rho(e(j), v(k)))
                                 + rho(a(j), rho(e(i), v(k)))))
        r1, r2, b1, b2 = self.rho1, self.rho2, L.bracket1, L.bracket2
        viol += enumerate_identity(
            "mixed representation identity", (n, n, m),
            lambda i, j, k: (r2(b1(e(i), e(j)), be[:, k]) + r1(b2(e(i), e(j)), be[:, k])
                             - r1(a(i), r2(e(j), v(k))) + r1(a(j), r2(e(i), v(k)))
                             - r2(a(i), r1(e(j), v(k))) + r2(a(j), r1(e(i), v(k)))))
        return CheckReport(ok=not viol, violations=viol)


def commutator_compatible_lie(A: CompatibleHomAlgebra) -> CompatibleHomLieAlgebra:
    if not A.is_valid():
        raise InvalidStructureError("input is not compatible", A.report())
    return CompatibleHomLieAlgebra(commutator(A.mu1), commutator(A.mu2), A.alpha)


def induced_rep(M: CompatibleBimodule, lie: CompatibleHomLieAlgebra | None = None) -> CompatibleHomLieRep:
    """``rho_i(a)m = a <_i m - m >_i a``."""
    if not M.is_valid():
        raise InvalidStructureError("input is not a compatible bimodule", M.report())
    lie = commutator_compatible_lie(M.algebra) if lie is None else lie
    rhos = [M.l1 - M.r1.permute_inputs([1, 0]), M.l2 - M.r2.permute_inputs([1, 0])]
    return CompatibleHomLieRep(lie, rhos[0], rhos[1], M.beta)


def cl_delta(which: int, L: CompatibleHomLieAlgebra, V: CompatibleHomLieRep,
             f: MultilinearMap, check: bool = True) -> MultilinearMap:
    """Hom-Lie Chevalley-Eilenberg coboundary of an alternating n-cochain.

    ``sum_i (-1)^{i+1} rho(alpha^{n-1} x_i) f(..., ^x_i, ...)
    + sum_{i<j} (-1)^{i+j} f([x_i, x_j], alpha x_1, ..., ^x_i, ..., ^x_j, ...)``
    """
    if check:
        if not is_alternating(f):
            raise ValueError("cochain is not alternating")
        if not is_equivariant(f, L.alpha, V.beta):
            raise ValueError("cochain does not commute with the twist maps")
    n = f.arity
    al = L.alpha
    an1 = el.matrix_power(al, n - 1)
    rho, br = V.rho(which), L.bracket(which)
    total = None
    # rho(alpha^{n-1} x_i) f(x_1, ..., ^x_i, ..., x_{n+1})
    base1 = rho.precompose([an1, None]).insert(1, f)
    for i in range(n + 1):
        term = _place(base1, [i])
        total = term if total is None else (total - term if i % 2 else total + term)
    # f([x_i, x_j], alpha x_1, ..., ^x_i, ..., ^x_j, ...)
    base2 = f.precompose([None] + [al] * (n - 1)).insert(0, br)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            term = _place(base2, [i, j])
            total = total - term if (i + j) % 2 else total + term
    return total


def _place(t: MultilinearMap, front: list[int]) -> MultilinearMap:
    """``t`` takes ``(x_front..., remaining x in order)``; re-express it in ``(x_0, ..., x_n)``."""
    rest = [k for k in range(t.arity) if k not in front]
    return t.permute_inputs(list(front) + rest)


def compatible_cl_delta(L: CompatibleHomLieAlgebra, V: CompatibleHomLieRep,
                        parts, check: bool = True) -> tuple:
    parts = tuple(parts)
    d1 = [cl_delta(1, L, V, f, check=check) for f in parts]
    d2 = [cl_delta(2, L, V, f, check=False) for f in parts]
    n = len(parts)
    out = [d1[0]]
    for i in range(1, n):
        out.append(d1[i] + d2[i - 1])
    out.append(d2[n - 1])
    return tuple(out)


def theta(c: CompatibleCochain) -> tuple:
    """Skew-symmetrize every part of a compatible cochain."""
    return tuple(skew_symmetrize(f) for f in c.parts)
