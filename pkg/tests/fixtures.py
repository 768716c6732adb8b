"""Shared structure constants.  Each fixture is raw data so both the package
and the independent oracle can be built from it."""

from dataclasses import dataclass, field

from homdefo import exactlin as el
from homdefo.bimod import CompatibleBimodule
from homdefo.homalg import CompatibleHomAlgebra, MultilinearMap

import oracle


@dataclass(frozen=True)
class AlgData:
    name: str
    dim: int
    mu1: tuple
    mu2: tuple = ()
    alpha: tuple | None = None
    valid: bool = True

    def build(self) -> CompatibleHomAlgebra:
        n = self.dim
        al = el.identity(n) if self.alpha is None else el.as_matrix(self.alpha)
        return CompatibleHomAlgebra(MultilinearMap.from_entries((n, n), n, self.mu1),
                                    MultilinearMap.from_entries((n, n), n, self.mu2), al,
                                    check=False)

    def oracle(self) -> "oracle.Alg":
        return oracle.Alg(self.dim, self.mu1, self.mu2, self.alpha)

    def oracle_adjoint(self) -> "oracle.Mod":
        return oracle.Mod.adjoint(self.oracle(), self.mu1, self.mu2)


DUAL = ((0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1))             # K[x]/(x^2), e0 = 1, e1 = x
CUBIC = ((0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (0, 2, 2, 1), (2, 0, 2, 1), (1, 1, 2, 1))
UPPER = ((0, 0, 0, 1), (0, 1, 1, 1))                          # E11, E12
RIGHT0 = ((0, 0, 0, 1), (1, 0, 1, 1))                         # a.b = b_0 a
RIGHT1 = ((0, 1, 0, 1), (1, 1, 1, 1))                         # a.b = b_1 a

# Nijenhuis product of multiplication by x on K[x]/(x^2): N(a)b + aN(b) - N(ab)
DUAL_NIJ = ((0, 0, 1, 1),)
# same on K[x]/(x^3)
CUBIC_NIJ = ((0, 0, 1, 1), (0, 1, 2, 1), (1, 0, 2, 1))

ZERO1 = AlgData("zero-1", 1, ())
ZERO2 = AlgData("zero-2", 2, ())
DUAL0 = AlgData("dual, mu2 = 0", 2, DUAL)
DUAL_SAME = AlgData("dual, mu2 = mu1", 2, DUAL, DUAL)
DUAL_N = AlgData("dual, Nijenhuis pair", 2, DUAL, DUAL_NIJ)
DUAL_YAU = AlgData("dual, Yau twist x -> -x", 2,
                   ((0, 0, 0, 1), (0, 1, 1, -1), (1, 0, 1, -1)), (),
                   ((1, 0), (0, -1)))
UPPER0 = AlgData("upper triangular", 2, UPPER)
RIGID = AlgData("rigid right-functional pair", 2, RIGHT0, RIGHT1)
CUBIC_N = AlgData("cubic, Nijenhuis pair", 3, CUBIC, CUBIC_NIJ)
CUBIC_KILL = AlgData("cubic, Yau twist x -> 0", 3, ((0, 0, 0, 1),), (),
                     ((1, 0, 0), (0, 0, 0), (0, 0, 0)))
CUBIC_NEG = AlgData("cubic, Yau twist x -> -x", 3,
                    ((0, 0, 0, 1), (0, 1, 1, -1), (1, 0, 1, -1), (0, 2, 2, 1), (2, 0, 2, 1),
                     (1, 1, 2, 1)), (),
                    ((1, 0, 0), (0, -1, 0), (0, 0, 1)))
DUAL_UNIT_SQUARE = AlgData("dual, mu2(x, x) = 1", 2, DUAL, ((1, 1, 0, 1),))

VALID = [ZERO1, ZERO2, DUAL0, DUAL_SAME, DUAL_N, DUAL_YAU, UPPER0, RIGID, CUBIC_N, CUBIC_KILL,
         CUBIC_NEG, DUAL_UNIT_SQUARE]

# each product is associative on its own, the pair is not compatible
BAD_MIXED = AlgData("dual paired with upper triangular", 2, DUAL, UPPER, valid=False)
BAD_NONASSOC = AlgData("non-associative", 2, ((0, 0, 1, 1), (1, 0, 0, 1)), valid=False)
BAD_TWIST = AlgData("dual with alpha = diag(1, 2)", 2, DUAL, (), ((1, 0), (0, 2)), valid=False)
BAD_CUBIC = AlgData("cubic with incompatible second product", 3, CUBIC, ((1, 1, 0, 1),),
                    valid=False)
BAD_MULT = AlgData("upper triangular, non-multiplicative twist", 2, UPPER, (),
                   ((0, 1), (1, 0)), valid=False)

INVALID = [BAD_MIXED, BAD_NONASSOC, BAD_TWIST, BAD_CUBIC, BAD_MULT]


def adjoint(data: AlgData) -> CompatibleBimodule:
    return CompatibleBimodule.adjoint(data.build())


@dataclass(frozen=True)
class ModData:
    """A non-adjoint bimodule given by raw actions."""

    name: str
    alg: AlgData
    dim: int
    l1: tuple = ()
    r1: tuple = ()
    l2: tuple = ()
    r2: tuple = ()
    beta: tuple | None = None

    def build(self) -> CompatibleBimodule:
        A = self.alg.build()
        n, m = A.dim, self.dim
        be = el.identity(m) if self.beta is None else el.as_matrix(self.beta)
        return CompatibleBimodule(
            A, MultilinearMap.from_entries((n, m), m, self.l1),
            MultilinearMap.from_entries((m, n), m, self.r1),
            MultilinearMap.from_entries((n, m), m, self.l2),
            MultilinearMap.from_entries((m, n), m, self.r2), be, check=False)

    def oracle(self) -> "oracle.Mod":
        return oracle.Mod(self.alg.oracle(), self.dim, self.l1, self.r1, self.l2, self.r2,
                          self.beta)


# augmentation module: 1 acts by 1, x acts by 0
AUGMENTED = ModData("dual, augmentation module", DUAL0, 1, ((0, 0, 0, 1),), ((0, 0, 0, 1),))
ZERO_ACTIONS = ModData("upper triangular, zero actions, beta = 2", UPPER0, 1, beta=((2,),))
RIGID_TRIVIAL = ModData("rigid pair, zero module", RIGID, 2, beta=((1, 0), (0, 1)))
