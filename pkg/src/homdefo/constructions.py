"""Factories for compatible Hom-associative algebras.

Every factory re-verifies its output with :func:`check_compatible` and
raises :class:`InvalidStructureError` if the result is not compatible.
"""

from __future__ import annotations

import numpy as np

from . import exactlin as el
from .bimod import Bimodule, CompatibleBimodule, semidirect_unchecked
from .cochain import hochschild_delta_single, is_equivariant
from .exactlin import DimensionError
from .homalg import (CheckReport, CompatibleHomAlgebra, HomAssociativeAlgebra,
                     InvalidStructureError, MultilinearMap, Violation, check_morphism,
                     enumerate_identity, unit)


def _verified(alg: CompatibleHomAlgebra, what: str) -> CompatibleHomAlgebra:
    rep = alg.report()
    if not rep.ok:
        raise InvalidStructureError(f"{what} did not produce a compatible algebra", rep)
    return alg


def _square(op, n):
    op = el.as_matrix(op)
    if op.shape != (n, n):
        raise DimensionError(f"operator must be {n}x{n}, got {op.shape}")
    return op


def yau_twist(algebra: CompatibleHomAlgebra, alpha) -> CompatibleHomAlgebra:
    """``(A, alpha o mu1, alpha o mu2, alpha)`` from a compatible associative algebra."""
    n = algebra.dim
    alpha = _square(alpha, n)
    if not all(algebra.alpha[i, j] == (1 if i == j else 0) for i in range(n) for j in range(n)):
        raise InvalidStructureError("Yau twist expects an untwisted (alpha = id) algebra")
    rep = check_morphism(algebra, algebra, alpha)
    if not rep.ok:
        raise InvalidStructureError("twist map is not a morphism of both products", rep)
    return _verified(CompatibleHomAlgebra(algebra.mu1.postcompose(alpha),
                                          algebra.mu2.postcompose(alpha), alpha, check=False),
                     "yau_twist")


def derived_algebra(algebra: CompatibleHomAlgebra, n: int) -> CompatibleHomAlgebra:
    """``(A, alpha^n o mu1, alpha^n o mu2, alpha^{n+1})``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not algebra.is_valid():
        raise InvalidStructureError("input is not compatible", algebra.report())
    an = el.matrix_power(algebra.alpha, n)
    return _verified(CompatibleHomAlgebra(algebra.mu1.postcompose(an), algebra.mu2.postcompose(an),
                                          an @ algebra.alpha, check=False),
                     "derived_algebra")


def _commutes(op, alpha) -> list[Violation]:
    d = op @ alpha - alpha @ op
    return [Violation("op o alpha = alpha o op", (i, j), (d[i, j],))
            for i in range(d.shape[0]) for j in range(d.shape[1]) if d[i, j] != 0]


def nijenhuis_product(mu: MultilinearMap, N) -> MultilinearMap:
    """``N(a)b + aN(b) - N(ab)``."""
    return mu.precompose([N, None]) + mu.precompose([None, N]) - mu.postcompose(N)


def check_nijenhuis(A: HomAssociativeAlgebra, N) -> CheckReport:
    n = A.dim
    N = _square(N, n)
    mu = A.mu
    e = lambda i: unit(n, i)
    viol = _commutes(N, A.alpha)
    viol += enumerate_identity(
        "N(a)N(b) = N(N(a)b + aN(b) - N(ab))", (n, n),
        lambda i, j: (mu(N[:, i], N[:, j])
                      - N @ (mu(N[:, i], e(j)) + mu(e(i), N[:, j]) - N @ mu(e(i), e(j)))))
    return CheckReport(ok=not viol, violations=viol)


def nijenhuis_pair(A: HomAssociativeAlgebra, N) -> CompatibleHomAlgebra:
    rep = check_nijenhuis(A, N)
    if not rep.ok:
        raise InvalidStructureError("not a Nijenhuis operator", rep)
    N = el.as_matrix(N)
    return _verified(CompatibleHomAlgebra(A.mu, nijenhuis_product(A.mu, N), A.alpha, check=False),
                     "nijenhuis_pair")


def rota_baxter_product(mu: MultilinearMap, R) -> MultilinearMap:
    """``R(a)b + aR(b)``."""
    return mu.precompose([R, None]) + mu.precompose([None, R])


def check_rota_baxter(A: HomAssociativeAlgebra, R) -> CheckReport:
    n = A.dim
    R = _square(R, n)
    mu = A.mu
    e = lambda i: unit(n, i)
    viol = _commutes(R, A.alpha)
    viol += enumerate_identity(
        "R(a)R(b) = R(R(a)b + aR(b))", (n, n),
        lambda i, j: mu(R[:, i], R[:, j]) - R @ (mu(R[:, i], e(j)) + mu(e(i), R[:, j])))
    return CheckReport(ok=not viol, violations=viol)


def check_compatible_rb_pair(A: HomAssociativeAlgebra, R, S) -> CheckReport:
    n = A.dim
    R, S = _square(R, n), _square(S, n)
    mu = A.mu
    e = lambda i: unit(n, i)

    def defect(i, j):
        lhs = mu(R[:, i], S[:, j]) + mu(S[:, i], R[:, j])
        rhs = (R @ (mu(S[:, i], e(j)) + mu(e(i), S[:, j]))
               + S @ (mu(R[:, i], e(j)) + mu(e(i), R[:, j])))
        return lhs - rhs
    viol = enumerate_identity("R(a)S(b) + S(a)R(b) = R(S(a)b + aS(b)) + S(R(a)b + aR(b))",
                              (n, n), defect)
    return CheckReport(ok=not viol, violations=viol)


def rb_pair_algebra(A: HomAssociativeAlgebra, R, S) -> CompatibleHomAlgebra:
    reports = [check_rota_baxter(A, R), check_rota_baxter(A, S), check_compatible_rb_pair(A, R, S)]
    rep = CheckReport.merge(*reports)
    if not rep.ok:
        raise InvalidStructureError("(R, S) is not a compatible Rota-Baxter pair", rep)
    R, S = el.as_matrix(R), el.as_matrix(S)
    return _verified(CompatibleHomAlgebra(rota_baxter_product(A.mu, R), rota_baxter_product(A.mu, S),
                                          A.alpha, check=False),
                     "rb_pair_algebra")


def f_twisted_semidirect(A: HomAssociativeAlgebra, M: Bimodule,
                         f: MultilinearMap) -> CompatibleHomAlgebra:
    """``(A + M, ._0, ._f, alpha + beta)`` for a Hochschild 2-cocycle ``f``."""
    if f.coeffs.shape != (A.dim, A.dim, M.dim):
        raise DimensionError("f must be a bilinear map A x A -> M")
    if not is_equivariant(f, A.alpha, M.beta):
        raise InvalidStructureError("f is not in C^2_{alpha,beta}")
    df = hochschild_delta_single(A, M, f, check=False)
    if not df.is_zero():
        err = InvalidStructureError("f is not a Hochschild 2-cocycle")
        err.defect = df
        raise err
    zero = CompatibleHomAlgebra(A.mu, A.mu, A.alpha, check=False)
    base = CompatibleBimodule(zero, M.left, M.right, M.left, M.right, M.beta, check=False)
    sd = semidirect_unchecked(base)
    dA = A.dim
    twisted = sd.mu2.coeffs.copy()
    twisted[:dA, :dA, dA:] += f.coeffs
    return _verified(CompatibleHomAlgebra(sd.mu1, MultilinearMap(twisted), sd.alpha, check=False),
                     "f_twisted_semidirect")


def semidirect_product(M: CompatibleBimodule) -> CompatibleHomAlgebra:
    from .bimod import semidirect_product as _sp
    return _verified(_sp(M), "semidirect_product")


def mult_operator(mu: MultilinearMap, x) -> np.ndarray:
    """Matrix of ``a -> x . a``."""
    x = el.as_vector(x)
    n = mu.codomain_dim
    return el.columns_to_matrix([mu(x, unit(n, i)) for i in range(n)], n)
