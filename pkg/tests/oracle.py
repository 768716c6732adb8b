"""Independent brute-force oracle written directly from the defining formulas.

Nothing here imports the package under test; structure constants come in as
plain nested dicts and all arithmetic is done with sympy rationals.  The code
is deliberately naive: loops over basis tuples, expansion by multilinearity.
"""

import itertools

import sympy as sp


def R(x):
    return sp.Rational(str(x))


class Alg:
    """``mu[s][(i, j)] -> {k: c}``; ``alpha`` a sympy Matrix (columns are images)."""

    def __init__(self, dim, mu1, mu2, alpha=None):
        self.dim = dim
        self.mu = {1: self._table(mu1), 2: self._table(mu2)}
        self.alpha = sp.eye(dim) if alpha is None else sp.Matrix(alpha).applyfunc(R)

    def _table(self, entries):
        t = {}
        for i, j, k, c in entries:
            t.setdefault((i, j), {}).setdefault(k, 0)
            t[(i, j)][k] += R(c)
        return t

    def mul(self, s, x, y):
        out = sp.zeros(self.dim, 1)
        for i in range(self.dim):
            if x[i] == 0:
                continue
            for j in range(self.dim):
                if y[j] == 0:
                    continue
                for k, c in self.mu[s].get((i, j), {}).items():
                    out[k] += x[i] * y[j] * c
        return out

    def e(self, i):
        v = sp.zeros(self.dim, 1)
        v[i] = 1
        return v


class Mod:
    """Actions as dicts ``l[s][(a, m)] -> {k: c}``, ``r[s][(m, a)] -> {k: c}``."""

    def __init__(self, alg, dim, l1, r1, l2, r2, beta=None):
        self.alg, self.dim = alg, dim
        tab = alg._table
        self.l = {1: tab(l1), 2: tab(l2)}
        self.r = {1: tab(r1), 2: tab(r2)}
        self.beta = sp.eye(dim) if beta is None else sp.Matrix(beta).applyfunc(R)

    @classmethod
    def adjoint(cls, alg, mu1, mu2):
        return cls(alg, alg.dim, mu1, mu1, mu2, mu2, alg.alpha)

    def _act(self, table, x, y, dx, dy):
        out = sp.zeros(self.dim, 1)
        for i in range(dx):
            if x[i] == 0:
                continue
            for j in range(dy):
                if y[j] == 0:
                    continue
                for k, c in table.get((i, j), {}).items():
                    out[k] += x[i] * y[j] * c
        return out

    def left(self, s, a, m):
        return self._act(self.l[s], a, m, self.alg.dim, self.dim)

    def right(self, s, m, a):
        return self._act(self.r[s], m, a, self.dim, self.alg.dim)


# -- axioms ---------------------------------------------------------------------

def hom_assoc_violations(A, s):
    """Index triples where ``(ab)alpha(c) != alpha(a)(bc)`` plus pairs breaking multiplicativity."""
    bad = []
    al = A.alpha
    for i, j, k in itertools.product(range(A.dim), repeat=3):
        a, b, c = A.e(i), A.e(j), A.e(k)
        if A.mul(s, A.mul(s, a, b), al * c) != A.mul(s, al * a, A.mul(s, b, c)):
            bad.append(("assoc", i, j, k))
    for i, j in itertools.product(range(A.dim), repeat=2):
        a, b = A.e(i), A.e(j)
        if al * A.mul(s, a, b) != A.mul(s, al * a, al * b):
            bad.append(("mult", i, j))
    return bad


def is_compatible(A):
    """``x mu1 + y mu2`` Hom-associative for all ``x, y``.

    The associator is quadratic in ``(x, y)``, so checking ``mu1``, ``mu2`` and
    ``mu1 + mu2`` covers every combination.
    """
    if hom_assoc_violations(A, 1) or hom_assoc_violations(A, 2):
        return False
    summed = Alg(A.dim, [], [], A.alpha)
    for s in (1, 2):
        for key, out in A.mu[s].items():
            for k, c in out.items():
                summed.mu[1].setdefault(key, {}).setdefault(k, 0)
                summed.mu[1][key][k] += c
    return not hom_assoc_violations(summed, 1)


def is_bimodule(M):
    A, al, be = M.alg, M.alg.alpha, M.beta
    ea, em = A.e, lambda i: sp.Matrix([1 if t == i else 0 for t in range(M.dim)])
    for s in (1, 2):
        for i, k in itertools.product(range(A.dim), range(M.dim)):
            if be * M.left(s, ea(i), em(k)) != M.left(s, al * ea(i), be * em(k)):
                return False
            if be * M.right(s, em(k), ea(i)) != M.right(s, be * em(k), al * ea(i)):
                return False
        for i, j, k in itertools.product(range(A.dim), range(A.dim), range(M.dim)):
            a, b, m = ea(i), ea(j), em(k)
            if M.left(s, A.mul(s, a, b), be * m) != M.left(s, al * a, M.left(s, b, m)):
                return False
            if M.right(s, be * m, A.mul(s, a, b)) != M.right(s, M.right(s, m, a), al * b):
                return False
            if M.right(s, M.left(s, a, m), al * b) != M.left(s, al * a, M.right(s, m, b)):
                return False
    for i, j, k in itertools.product(range(A.dim), range(A.dim), range(M.dim)):
        a, b, m = ea(i), ea(j), em(k)
        if (M.left(2, A.mul(1, a, b), be * m) + M.left(1, A.mul(2, a, b), be * m)
                != M.left(1, al * a, M.left(2, b, m)) + M.left(2, al * a, M.left(1, b, m))):
            return False
        if (M.right(2, M.left(1, a, m), al * b) + M.right(1, M.left(2, a, m), al * b)
                != M.left(1, al * a, M.right(2, m, b)) + M.left(2, al * a, M.right(1, m, b))):
            return False
        if (M.right(2, M.right(1, m, a), al * b) + M.right(1, M.right(2, m, a), al * b)
                != M.right(1, be * m, A.mul(2, a, b)) + M.right(2, be * m, A.mul(1, a, b))):
            return False
    return True


# -- cochains -------------------------------------------------------------------

def _tuples(d, n):
    return list(itertools.product(range(d), repeat=n))


def evaluate(f, dimA, vectors):
    """Evaluate ``f`` (dict: index tuple -> sympy column) on vectors by multilinearity."""
    n = len(vectors)
    out = None
    for idx in _tuples(dimA, n):
        c = 1
        for v, i in zip(vectors, idx):
            c *= v[i]
            if c == 0:
                break
        if c == 0:
            continue
        term = f[idx] * c
        out = term if out is None else out + term
    return out if out is not None else f[next(iter(f))] * 0


def cochain_space(M, n):
    """Basis of ``{f : beta f = f alpha^{x n}}`` as flat vectors in ambient coordinates."""
    A = M.alg
    dA, dM = A.dim, M.dim
    idxs = _tuples(dA, n)
    size = len(idxs) * dM
    pos = {(idx, k): p for p, (idx, k) in enumerate((i, k) for i in idxs for k in range(dM))}
    rows = []
    for idx in idxs:
        for k in range(dM):
            row = [0] * size
            # (beta f(e_idx))_k
            for t in range(dM):
                row[pos[(idx, t)]] += M.beta[k, t]
            # f(alpha e_i1, ..., alpha e_in)_k
            for jdx in idxs:
                c = 1
                for i, j in zip(idx, jdx):
                    c *= A.alpha[j, i]
                if c != 0:
                    row[pos[(jdx, k)]] -= c
            rows.append(row)
    mat = sp.Matrix(rows) if rows else sp.zeros(0, size)
    return [list(v) for v in mat.nullspace()], idxs, pos


def unflatten(vec, idxs, dM):
    return {idx: sp.Matrix(vec[p * dM:(p + 1) * dM]) for p, idx in enumerate(idxs)}


def flatten(f, idxs):
    out = []
    for idx in idxs:
        out.extend(list(f[idx]))
    return out


def hochschild(M, s, f, n):
    """``delta_s f`` as a dict on (n+1)-tuples."""
    A = M.alg
    dA = A.dim
    al = A.alpha
    alpow = al ** (n - 1)
    out = {}
    for idx in _tuples(dA, n + 1):
        xs = [A.e(i) for i in idx]
        v = M.left(s, alpow * xs[0], evaluate(f, dA, xs[1:]))
        for i in range(1, n + 1):
            args = [al * x for x in xs[:i - 1]] + [A.mul(s, xs[i - 1], xs[i])] + [al * x for x in xs[i + 1:]]
            v += (-1) ** i * evaluate(f, dA, args)
        v += (-1) ** (n + 1) * M.right(s, evaluate(f, dA, xs[:n]), alpow * xs[n])
        out[idx] = v
    return out


def compatible_delta(M, parts, n):
    d1 = [hochschild(M, 1, f, n) for f in parts]
    d2 = [hochschild(M, 2, f, n) for f in parts]
    out = [d1[0]]
    for i in range(1, n):
        out.append({k: d1[i][k] + d2[i - 1][k] for k in d1[i]})
    out.append(d2[n - 1])
    return out


def compatible_matrix(M, n):
    """Columns: ``delta^{n,c}`` of a basis of ``(C^n)^n``, in ambient coordinates."""
    basis, idxs, _ = cochain_space(M, n)
    dM = M.dim
    zero = {idx: sp.zeros(dM, 1) for idx in idxs}
    out_idxs = _tuples(M.alg.dim, n + 1)
    cols = []
    for slot in range(n):
        for b in basis:
            parts = [zero] * n
            parts = list(parts)
            parts[slot] = unflatten(b, idxs, dM)
            img = compatible_delta(M, parts, n)
            col = []
            for g in img:
                col.extend(flatten(g, out_idxs))
            cols.append(col)
    height = (n + 1) * len(out_idxs) * dM
    if not cols:
        return sp.zeros(height, 0), n * len(basis)
    return sp.Matrix(cols).T, n * len(basis)


def cohomology_dims(M, n):
    """``(dim C^{n,c}, dim Z, dim B, dim H)``."""
    D, dimC = compatible_matrix(M, n)
    Z = dimC - (D.rank() if D.shape[1] else 0)
    if n == 1:
        B = 0
    else:
        Dp, _ = compatible_matrix(M, n - 1)
        B = Dp.rank() if Dp.shape[1] else 0
    return dimC, Z, B, Z - B


# -- Hom-Lie Chevalley-Eilenberg --------------------------------------------------

def commutator_table(A, s):
    """``[e_i, e_j]`` as sympy columns."""
    return {(i, j): A.mul(s, A.e(i), A.e(j)) - A.mul(s, A.e(j), A.e(i))
            for i in range(A.dim) for j in range(A.dim)}


def rho(M, s, a, m):
    return M.left(s, a, m) - M.right(s, m, a)


def ce_delta(M, s, f, n):
    """Hom-Lie coboundary of an alternating n-cochain ``f`` (dict on n-tuples)."""
    A = M.alg
    dA, al = A.dim, A.alpha
    alpow = al ** (n - 1)
    out = {}
    for idx in _tuples(dA, n + 1):
        xs = [A.e(i) for i in idx]
        v = sp.zeros(M.dim, 1)
        for i in range(n + 1):
            rest = xs[:i] + xs[i + 1:]
            v += (-1) ** i * rho(M, s, alpow * xs[i], evaluate(f, dA, rest))
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                br = A.mul(s, xs[i], xs[j]) - A.mul(s, xs[j], xs[i])
                rest = [al * x for k, x in enumerate(xs) if k not in (i, j)]
                v += (-1) ** (i + j) * evaluate(f, dA, [br] + rest)
        out[idx] = v
    return out
