"""K-groups, Bowen-Franks groups and the flow-equivalence comparison for Z_N.

The level-``l`` cokernel ``Z^(2l+5) / (M^t - I^t) Z^(2l+3)`` is identified with
``Z/N + Z + Z`` through the coordinate map ``xi`` below; the connecting maps of
the K_0 tower are obtained by pushing lifts through ``I^t`` and reading them
back with ``xi`` at the next level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConsistencyError, InputError
from .intlin import (
    FgAbelianGroup,
    GroupHom,
    IntMatrix,
    LimitResult,
    cokernel,
    hom_ext_to_Z,
    inductive_limit,
    kernel_basis,
    matvec,
    solve_integer,
    sub,
    transpose,
)
from .lambda_graph import build_level_pair
from .words import Alphabet


@dataclass(frozen=True)
class XiImage:
    r: int
    eta: int
    psi: int

    def as_list(self) -> list[int]:
        return [self.r, self.eta, self.psi]


def transposes(l: int, n: int) -> tuple[IntMatrix, IntMatrix]:
    """``(M_{l,l+1}^t, I_{l,l+1}^t)``, each ``(2l+5) x (2l+3)``."""
    p = build_level_pair(l, Alphabet(n))
    return transpose(p.m_nonneg), transpose(p.i_matrix)


def difference_matrix(l: int, n: int) -> IntMatrix:
    mt, it = transposes(l, n)
    return sub(mt, it)


def _check(z, l: int, n: int) -> list[int]:
    if not isinstance(l, int) or l < 2:
        raise InputError(f"level must be >= 2, got {l!r}")
    if n < 1:
        raise InputError("N must be >= 1")
    z = [int(v) for v in z]
    if len(z) != 2 * l + 5:
        raise InputError(f"expected a vector of length {2 * l + 5}, got {len(z)}")
    return z


def xi(z, l: int, n: int) -> XiImage:
    """Closed-form coordinates ``(r, eta, psi)`` of ``z`` in ``Z^(2l+5)``."""
    z = _check(z, l, n)
    Z = lambda i: z[i - 1]  # noqa: E731  (1-based, matching the basis numbering)
    r = (Z(1) - Z(2 * l + 5)) % n
    eta = (
        -Z(1)
        + sum(Z(i) for i in range(3, 2 * l + 2, 2))
        + Z(2 * l + 2)
        - Z(2 * l + 4)
        - (l - 1) * Z(2 * l + 5)
        + r
    )
    psi = -Z(2 * l + 2) + Z(2 * l + 3) + Z(2 * l + 4) - Z(2 * l + 5)
    return XiImage(r, eta, psi)


def backsolve(z, l: int, n: int) -> tuple[list[int], list[int]]:
    """``x`` and remainder ``rho`` with ``z = (M^t - I^t) x + rho``.

    ``rho`` is zero outside coordinates 1, 3 and ``2l+3`` (1-based), where it
    carries ``r``, ``eta`` and ``psi``.
    """
    z = _check(z, l, n)
    Z = lambda i: z[i - 1]  # noqa: E731
    x = [0] * (2 * l + 4)  # x[1..2l+3]
    last = Z(2 * l + 5)
    x[2 * l + 3] = Z(2 * l + 4)
    x[2 * l + 1] = Z(2 * l + 2)
    for j in range(l - 1, 0, -1):
        x[2 * j + 1] = Z(2 * j + 3) - last + x[2 * j + 3]
    x[1] = last
    x[2] = (Z(1) - last) // n
    x[4] = Z(2) - Z(2 * l + 4) - (n - 1) * x[2]
    for j in range(2, l + 1):
        x[2 * j + 2] = Z(2 * j) - x[2 * j - 1] + x[2 * j]
    x = x[1:]
    az = matvec(difference_matrix(l, n), x)
    rho = [zi - ai for zi, ai in zip(z, az)]
    slots = {0, 2, 2 * l + 2}
    if any(v for i, v in enumerate(rho) if i not in slots):
        raise ConsistencyError("remainder has entries outside the (r, eta, psi) slots")
    if XiImage(rho[0], rho[2], rho[2 * l + 2]) != xi(z, l, n):
        raise ConsistencyError("backsolve remainder disagrees with the closed form")
    return x, rho


def xi_lift(coords, l: int, n: int) -> list[int]:
    """``[g, 0, m, 0, ..., 0, k, 0, 0]``: a vector with ``xi`` equal to ``(g, m, k)``."""
    g, m, k = coords
    z = [0] * (2 * l + 5)
    z[0], z[2], z[2 * l + 2] = g, m, k
    return z


def k_groups_level(l: int, n: int) -> tuple[FgAbelianGroup, int]:
    """Cokernel and kernel rank of ``M_{l,l+1}^t - I_{l,l+1}^t``."""
    a = difference_matrix(l, n)
    return cokernel(a, 2 * l + 3).group, len(kernel_basis(a, 2 * l + 3))


def _xi_group(n: int) -> FgAbelianGroup:
    return FgAbelianGroup.from_orders([n] if n > 1 else [], 2)


def connecting_map_xi(l: int, n: int) -> IntMatrix:
    """3x3 matrix of ``I^t_{l+1,l+2}`` between the level-``l`` and level-``(l+1)`` cokernels,
    written in ``(r, eta, psi)`` coordinates."""
    _, it_next = transposes(l + 1, n)
    cols = []
    for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1]):
        if n == 1 and e[0]:
            # residues mod 1 are all zero; lifts only exist for g in 0..N-1
            cols.append([0, 0, 0])
            continue
        z = xi_lift(e, l, n)
        if xi(z, l, n).as_list() != e:
            raise ConsistencyError("lift does not invert xi")
        cols.append(xi(matvec(it_next, z), l + 1, n).as_list())
    m = [list(r) for r in zip(*cols)]
    # the residue coordinate is only defined mod N
    m[0] = [v % n for v in m[0]]
    return m


def _restrict(m: IntMatrix, n: int) -> IntMatrix:
    # drop the residue coordinate when N = 1 (Z/1 is trivial)
    return m if n > 1 else [row[1:] for row in m[1:]]


@dataclass
class KGroups:
    n: int
    k0: FgAbelianGroup | None
    k1: FgAbelianGroup | None
    unit_class: XiImage
    stabilization_level: int | None
    connecting_maps: list[IntMatrix] = field(default_factory=list)
    level_groups: list[FgAbelianGroup] = field(default_factory=list)
    status: str = "stable"

    def to_dict(self) -> dict:
        return {
            "N": self.n,
            "K0": self.k0.to_dict() if self.k0 else None,
            "K1": self.k1.to_dict() if self.k1 else None,
            "unit_class": self.unit_class.as_list(),
            "stabilization_level": self.stabilization_level,
            "status": self.status,
        }


def _kernel_tower(n: int, levels: list[int]) -> LimitResult:
    bases, groups = [], []
    for l in levels:
        basis = kernel_basis(difference_matrix(l, n), 2 * l + 3)
        bases.append(basis)
        groups.append(FgAbelianGroup((), len(basis)))
    maps = []
    for t, l in enumerate(levels[:-1]):
        _, it = transposes(l, n)
        src, dst = bases[t], bases[t + 1]
        dst_mat = [[v[i] for v in dst] for i in range(2 * l + 5)]
        cols = []
        for v in src:
            y = solve_integer(dst_mat, matvec(it, v), len(dst))
            if y is None:
                raise ConsistencyError("I^t does not map kernels into kernels")
            cols.append(y)
        mat = [[c[i] for c in cols] for i in range(len(dst))] if dst else []
        maps.append(GroupHom(groups[t], groups[t + 1], mat))
    return inductive_limit(groups, maps)


def k_groups(n: int, max_level: int = 6, min_level: int = 2) -> KGroups:
    """K_0 and K_1 as limits over levels ``min_level..max_level``."""
    if max_level < 4:
        raise InputError("max_level must be >= 4")
    if n < 1:
        raise InputError("N must be >= 1")
    levels = list(range(min_level, max_level + 1))
    level_groups = [k_groups_level(l, n)[0] for l in levels]
    g = _xi_group(n)
    for l, lg in zip(levels, level_groups):
        if lg != g:
            raise ConsistencyError(f"level {l} cokernel is {lg}, expected {g}")
    raw_maps = [connecting_map_xi(l, n) for l in levels[:-1]]
    maps = [GroupHom(g, g, _restrict(m, n)) for m in raw_maps]
    lim = inductive_limit([g] * len(levels), maps)
    k1 = _kernel_tower(n, levels)

    l0 = levels[0]
    _, it = transposes(l0, n)
    unit = xi(matvec(it, [1] * (2 * l0 + 3)), l0, n)
    if unit != xi([1] * (2 * l0 + 5), l0, n):
        raise ConsistencyError("the two readings of the unit class disagree")
    status = "stable" if lim.status == "stable" and k1.status == "stable" else "undetermined"
    return KGroups(
        n=n,
        k0=lim.group,
        k1=k1.group,
        unit_class=unit,
        stabilization_level=None if lim.stage is None else levels[lim.stage],
        connecting_maps=raw_maps,
        level_groups=level_groups,
        status=status,
    )


def k0_via_snf(n: int, max_level: int = 6, min_level: int = 2) -> LimitResult:
    """K_0 tower in Smith-form coordinates; independent of ``xi``."""
    levels = list(range(min_level, max_level + 1))
    cokers = [cokernel(difference_matrix(l, n), 2 * l + 3) for l in levels]
    maps = []
    for t, l in enumerate(levels[:-1]):
        _, it_next = transposes(l + 1, n)
        src, dst = cokers[t], cokers[t + 1]
        cols = []
        for j in range(src.group.ngens):
            e = [int(i == j) for i in range(src.group.ngens)]
            cols.append(dst.coordinates(matvec(it_next, src.lift(e))))
        mat = [[c[i] for c in cols] for i in range(dst.group.ngens)]
        maps.append(GroupHom(src.group, dst.group, mat))
    return inductive_limit([c.group for c in cokers], maps)


@dataclass
class BowenFranks:
    bf0: FgAbelianGroup
    bf1: FgAbelianGroup


def bowen_franks(n: int, max_level: int = 6) -> BowenFranks:
    kg = k_groups(n, max_level)
    if kg.status != "stable":
        raise ConsistencyError("K-groups undetermined; Bowen-Franks groups unavailable")
    hom0, ext0 = hom_ext_to_Z(kg.k0)
    hom1, ext1 = hom_ext_to_Z(kg.k1)
    return BowenFranks(bf0=ext0 + hom1, bf1=ext1 + hom0)


def invariants(n: int, max_level: int = 6) -> dict:
    kg = k_groups(n, max_level)
    bf = bowen_franks(n, max_level)
    return {
        "N": n,
        "K0": kg.k0.to_dict(),
        "K1": kg.k1.to_dict(),
        "unit_class": kg.unit_class.as_list(),
        "BF0": bf.bf0.to_dict(),
        "BF1": bf.bf1.to_dict(),
        "stabilization_level": kg.stabilization_level,
    }


def flow_report(n1: int, n2: int, max_level: int = 6) -> dict:
    if n1 < 1 or n2 < 1:
        raise InputError("N1 and N2 must be >= 1")
    a, b = invariants(n1, max_level), invariants(n2, max_level)
    keys = ("K0", "K1", "BF0", "BF1")
    differing = [k for k in keys if a[k] != b[k]]
    if differing:
        conclusion = f"Z_{n1} and Z_{n2} are not flow equivalent ({', '.join(differing)} differ)."
    else:
        conclusion = f"Z_{n1} and Z_{n2} are not distinguished by K_0, K_1, BF^0, BF^1."
    return {"left": a, "right": b, "distinguishable": bool(differing), "differing": differing, "conclusion": conclusion}
