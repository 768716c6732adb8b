"""Bimodules over (compatible) Hom-associative algebras.

Left actions are stored as maps ``A x M -> M`` and right actions as
``M x A -> M``.
"""

from __future__ import annotations

from dataclasses import dataclass, InitVar

import numpy as np

from . import exactlin as el
from .exactlin import DimensionError
from .homalg import (CheckReport, CompatibleHomAlgebra, HomAssociativeAlgebra,
                     InvalidStructureError, MultilinearMap, Violation,
                     enumerate_identity, unit)


def _action(x, shape, what):
    if not isinstance(x, MultilinearMap):
        x = MultilinearMap(x)
    if x.coeffs.shape != shape:
        raise DimensionError(f"{what} must have shape {shape}, got {x.coeffs.shape}")
    return x


def bimodule_violations(mu, alpha, left, right, beta, dimA, dimM) -> list[Violation]:
    """The five single-product bimodule identities on all basis triples."""
    ea = lambda i: unit(dimA, i)
    em = lambda i: unit(dimM, i)
    a = lambda i: alpha[:, i]
    b = lambda i: beta[:, i]
    viol = enumerate_identity(
        "beta(a<m) = alpha(a)<beta(m)", (dimA, dimM),
        lambda i, m: beta @ left(ea(i), em(m)) - left(a(i), b(m)))
    viol += enumerate_identity(
        "beta(m>a) = beta(m)>alpha(a)", (dimM, dimA),
        lambda m, i: beta @ right(em(m), ea(i)) - right(b(m), a(i)))
    viol += enumerate_identity(
        "(ab)<beta(m) = alpha(a)<(b<m)", (dimA, dimA, dimM),
        lambda i, j, m: left(mu(ea(i), ea(j)), b(m)) - left(a(i), left(ea(j), em(m))))
    viol += enumerate_identity(
        "(a<m)>alpha(b) = alpha(a)<(m>b)", (dimA, dimM, dimA),
        lambda i, m, j: right(left(ea(i), em(m)), a(j)) - left(a(i), right(em(m), ea(j))))
    viol += enumerate_identity(
        "(m>a)>alpha(b) = beta(m)>(ab)", (dimM, dimA, dimA),
        lambda m, i, j: right(right(em(m), ea(i)), a(j)) - right(b(m), mu(ea(i), ea(j))))
    return viol


@dataclass(eq=False)
class Bimodule:
    """``(M, l, r, beta)`` over a Hom-associative algebra."""

    algebra: HomAssociativeAlgebra
    left: MultilinearMap
    right: MultilinearMap
    beta: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check):
        self.beta = el.as_matrix(self.beta)
        dA, dM = self.algebra.dim, self.beta.shape[0]
        self.left = _action(self.left, (dA, dM, dM), "left action")
        self.right = _action(self.right, (dM, dA, dM), "right action")
        if check and not self.report().ok:
            raise InvalidStructureError("not a bimodule", self.report())

    @property
    def dim(self) -> int:
        return self.beta.shape[0]

    def report(self) -> CheckReport:
        A = self.algebra
        viol = bimodule_violations(A.mu, A.alpha, self.left, self.right, self.beta,
                                   A.dim, self.dim)
        return CheckReport(ok=not viol, violations=viol)

    @classmethod
    def adjoint(cls, algebra: HomAssociativeAlgebra) -> "Bimodule":
        return cls(algebra, algebra.mu, algebra.mu, algebra.alpha.copy(), check=False)


@dataclass(eq=False)
class CompatibleBimodule:
    """``(M, l1, r1, l2, r2, beta)`` over a compatible Hom-associative algebra."""

    algebra: CompatibleHomAlgebra
    l1: MultilinearMap
    r1: MultilinearMap
    l2: MultilinearMap
    r2: MultilinearMap
    beta: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check):
        self.beta = el.as_matrix(self.beta)
        dA, dM = self.algebra.dim, self.beta.shape[0]
        if self.beta.shape != (dM, dM):
            raise DimensionError("beta must be square")
        self.l1 = _action(self.l1, (dA, dM, dM), "l1")
        self.l2 = _action(self.l2, (dA, dM, dM), "l2")
        self.r1 = _action(self.r1, (dM, dA, dM), "r1")
        self.r2 = _action(self.r2, (dM, dA, dM), "r2")
        self._report = None
        if check and not self.report().ok:
            raise InvalidStructureError("not a compatible bimodule", self.report())

    @classmethod
    def unchecked(cls, algebra, l1, r1, l2, r2, beta) -> "CompatibleBimodule":
        return cls(algebra, l1, r1, l2, r2, beta, check=False)

    @classmethod
    def adjoint(cls, algebra: CompatibleHomAlgebra) -> "CompatibleBimodule":
        return cls(algebra, algebra.mu1, algebra.mu1, algebra.mu2, algebra.mu2,
                   algebra.alpha.copy(), check=False)

    @classmethod
    def zero(cls, algebra: CompatibleHomAlgebra, beta) -> "CompatibleBimodule":
        beta = el.as_matrix(beta)
        dA, dM = algebra.dim, beta.shape[0]
        zl = MultilinearMap.zero((dA, dM), dM)
        zr = MultilinearMap.zero((dM, dA), dM)
        return cls(algebra, zl, zr, zl, zr, beta, check=False)

    @property
    def dim(self) -> int:
        return self.beta.shape[0]

    def actions(self, which: int) -> tuple[MultilinearMap, MultilinearMap]:
        if which == 1:
            return self.l1, self.r1
        if which == 2:
            return self.l2, self.r2
        raise ValueError("which must be 1 or 2")

    def single(self, which: int) -> Bimodule:
        l, r = self.actions(which)
        return Bimodule(self.algebra.single(which), l, r, self.beta, check=False)

    def report(self) -> CheckReport:
        if self._report is None:
            self._report = check_bimodule(self)
        return self._report

    def is_valid(self) -> bool:
        return self.report().ok


def check_bimodule(m: CompatibleBimodule) -> CheckReport:
    """Both single-product bimodule structures, then the three mixed identities."""
    A = m.algebra
    dA, dM = A.dim, m.dim
    alpha, beta = A.alpha, m.beta
    mu1, mu2 = A.mu1, A.mu2
    l1, r1, l2, r2 = m.l1, m.r1, m.l2, m.r2
    viol = []
    for s in (1, 2):
        l, r = m.actions(s)
        viol += [Violation(f"{v.identity} [{s}]", v.indices, v.defect)
                 for v in bimodule_violations(A.product(s), alpha, l, r, beta, dA, dM)]
    ea = lambda i: unit(dA, i)
    em = lambda i: unit(dM, i)
    a = lambda i: alpha[:, i]
    b = lambda i: beta[:, i]
    viol += enumerate_identity(
        "mixed left", (dA, dA, dM),
        lambda i, j, k: (l2(mu1(ea(i), ea(j)), b(k)) + l1(mu2(ea(i), ea(j)), b(k))
                         - l1(a(i), l2(ea(j), em(k))) - l2(a(i), l1(ea(j), em(k)))))
    viol += enumerate_identity(
        "mixed middle", (dA, dM, dA),
        lambda i, k, j: (r2(l1(ea(i), em(k)), a(j)) + r1(l2(ea(i), em(k)), a(j))
                         - l1(a(i), r2(em(k), ea(j))) - l2(a(i), r1(em(k), ea(j)))))
    viol += enumerate_identity(
        "mixed right", (dM, dA, dA),
        lambda k, i, j: (r2(r1(em(k), ea(i)), a(j)) + r1(r2(em(k), ea(i)), a(j))
                         - r1(b(k), mu2(ea(i), ea(j))) - r2(b(k), mu1(ea(i), ea(j)))))
    return CheckReport(ok=not viol, violations=viol)


def sum_bimodule(m: CompatibleBimodule) -> Bimodule:
    """``(M, l1 + l2, r1 + r2, beta)`` over ``(A, mu1 + mu2, alpha)``."""
    A = m.algebra
    plus = HomAssociativeAlgebra(A.mu1 + A.mu2, A.alpha, check=False)
    return Bimodule(plus, m.l1 + m.l2, m.r1 + m.r2, m.beta, check=False)


def _as_operators(left: MultilinearMap) -> list[np.ndarray]:
    """``a -> l(a, -)`` as matrices, one per basis element of A."""
    return [left.coeffs[i].T.copy() for i in range(left.domain_dims[0])]


def _right_operators(right: MultilinearMap) -> list[np.ndarray]:
    return [right.coeffs[:, i, :].T.copy() for i in range(right.domain_dims[1])]


def _starred(ops: list[np.ndarray], alpha, beta_inv2) -> list[np.ndarray]:
    """``x*(alpha(a)) o ((beta^-2)^T)`` with ``x*(a) = -x(a)^T``, per basis element."""
    out = []
    dA = len(ops)
    for i in range(dA):
        col = alpha[:, i]
        xa = sum((col[j] * ops[j] for j in range(dA)), el.zeros(*ops[0].shape))
        out.append(-xa.T @ beta_inv2.T)
    return out


def dual_actions(left: MultilinearMap, right: MultilinearMap, alpha, beta):
    """Dual left and right actions of a single-product bimodule on ``M*``.

    Left: ``r* - l*``; right: ``-l*`` (starred maps as above).
    """
    dA = left.domain_dims[0]
    dM = beta.shape[0]
    binv = el.inverse(beta)
    binv2 = binv @ binv
    lstar = _starred(_as_operators(left), alpha, binv2)
    rstar = _starred(_right_operators(right), alpha, binv2)
    new_left = MultilinearMap.from_function(
        (dA, dM), dM, lambda i, k: (rstar[i] - lstar[i])[:, k])
    new_right = MultilinearMap.from_function(
        (dM, dA), dM, lambda k, i: (-lstar[i])[:, k])
    return new_left, new_right


def dual_bimodule(m: CompatibleBimodule) -> CompatibleBimodule:
    """The dual bimodule on ``M*`` with twist ``(beta^-1)^T``.

    Each product's pair of actions is dualized separately, so the sums
    ``l1' + l2'`` and ``r1' + r2'`` are ``r1* - l1* + r2* - l2*`` and
    ``-l1* - l2*``.  The result is returned unchecked; call
    :func:`check_bimodule` on it.
    """
    if el.rank(m.beta) < m.dim:
        raise InvalidStructureError("dual bimodule requires beta to be invertible")
    alpha = m.algebra.alpha
    l1, r1 = dual_actions(m.l1, m.r1, alpha, m.beta)
    l2, r2 = dual_actions(m.l2, m.r2, alpha, m.beta)
    beta_dual = el.inverse(m.beta).T.copy()
    return CompatibleBimodule(m.algebra, l1, r1, l2, r2, beta_dual, check=False)


def semidirect_product(m: CompatibleBimodule) -> CompatibleHomAlgebra:
    """Compatible algebra on ``A + M`` (A coordinates first)."""
    if not m.is_valid():
        raise InvalidStructureError("semidirect product needs a valid compatible bimodule",
                                    m.report())
    return semidirect_unchecked(m)


def semidirect_unchecked(m: CompatibleBimodule) -> CompatibleHomAlgebra:
    A = m.algebra
    dA, dM = A.dim, m.dim
    n = dA + dM
    prods = []
    for s in (1, 2):
        mu = A.product(s)
        l, r = m.actions(s)
        c = el.zeros(n, n, n)
        c[:dA, :dA, :dA] = mu.coeffs
        c[:dA, dA:, dA:] = l.coeffs
        c[dA:, :dA, dA:] = r.coeffs
        prods.append(MultilinearMap(c))
    tw = el.zeros(n, n)
    tw[:dA, :dA] = A.alpha
    tw[dA:, dA:] = m.beta
    return CompatibleHomAlgebra(prods[0], prods[1], tw, check=False)
