"""Exact integer matrices, Smith normal form and finitely generated abelian groups.

Matrices are plain lists of rows of Python ints, so every computation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def shape(a: IntMatrix) -> tuple[int, int]:
    # a 0-row matrix has no way to carry its column count; callers pass cols explicitly
    return len(a), (len(a[0]) if a else 0)


def transpose(a: IntMatrix) -> IntMatrix:
    return [list(r) for r in zip(*a)]


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: IntMatrix, v) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def sub(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def det(a: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


@dataclass
class SmithForm:
    """``A = U @ D @ V`` with ``U``, ``V`` unimodular; inverses kept alongside."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.V)))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(a: IntMatrix, cols: int | None = None) -> SmithForm:
    rows = len(a)
    if cols is None:
        cols = len(a[0]) if rows else 0
    A = [list(map(int, r)) for r in a]
    U, U_inv = identity(rows), identity(rows)
    V, V_inv = identity(cols), identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U_inv[i], U_inv[j] = U_inv[j], U_inv[i]
        for r in U:
            r[i], r[j] = r[j], r[i]

    def add_row(i, j, q):
        # row_i += q * row_j
        A[i] = [x + q * y for x, y in zip(A[i], A[j])]
        U_inv[i] = [x + q * y for x, y in zip(U_inv[i], U_inv[j])]
        for r in U:
            r[j] -= q * r[i]

    def neg_row(i):
        A[i] = [-x for x in A[i]]
        U_inv[i] = [-x for x in U_inv[i]]
        for r in U:
            r[i] = -r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V_inv:
            r[i], r[j] = r[j], r[i]
        V[i], V[j] = V[j], V[i]

    def add_col(i, j, q):
        # col_i += q * col_j
        for r in A:
            r[i] += q * r[j]
        for r in V_inv:
            r[i] += q * r[j]
        V[j] = [x - q * y for x, y in zip(V[j], V[i])]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # a nonzero remainder is smaller than the pivot; promote the smallest
                best = (t, t)
                for i in range(t, rows):
                    if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t, cols):
                    if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                        best = (t, j)
                if best[0] != t:
                    swap_rows(t, best[0])
                if best[1] != t:
                    swap_cols(t, best[1])
                continue
            p = A[t][t]
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            neg_row(t)
    return SmithForm(U=U, D=A, V=V, U_inv=U_inv, V_inv=V_inv)


def kernel_basis(a: IntMatrix, cols: int | None = None) -> list[list[int]]:
    """Basis of ``{x in Z^cols : a x = 0}``; empty when the kernel is trivial."""
    if cols is None:
        cols = len(a[0]) if a else 0
    s = smith_normal_form(a, cols)
    r = s.rank
    return [[s.V_inv[i][j] for i in range(cols)] for j in range(r, cols)]


def solve_integer(a: IntMatrix, b, cols: int | None = None) -> list[int] | None:
    """An integer solution of ``a x = b``, or ``None`` if there is none."""
    if cols is None:
        cols = len(a[0]) if a else 0
    s = smith_normal_form(a, cols)
    c = matvec(s.U_inv, b)
    y = [0] * cols
    for i, ci in enumerate(c):
        d = s.D[i][i] if i < cols else 0
        if d == 0:
            if ci:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return matvec(s.V_inv, y)


def invariant_factors(orders) -> tuple[int, ...]:
    """Invariant factors (each >= 2, dividing chain) of a direct sum of cyclic groups."""
    orders = [abs(int(d)) for d in orders]
    if any(d == 0 for d in orders):
        raise InputError("cyclic orders must be nonzero; count free summands separately")
    n = len(orders)
    diag = smith_normal_form([[orders[i] if i == j else 0 for j in range(n)] for i in range(n)], n).diagonal
    return tuple(d for d in diag if d > 1)


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z/d_1 + ... + Z/d_s + Z^r`` with ``d_1 | d_2 | ... | d_s`` and every ``d_i >= 2``.

    Generators are ordered torsion first, then free.
    """

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise InputError(f"torsion {t} is not a normalized invariant-factor list")
        if self.free_rank < 0:
            raise InputError("free rank must be >= 0")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_orders(cls, orders=(), free_rank: int = 0) -> "FgAbelianGroup":
        return cls(invariant_factors(orders), free_rank)

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> list[int]:
        """Order of each generator, 0 meaning infinite."""
        return list(self.torsion) + [0] * self.free_rank

    def relations(self) -> IntMatrix:
        """Columns generate the relation lattice of the generator coordinates."""
        n = self.ngens
        return [[self.torsion[j] if i == j else 0 for j in range(len(self.torsion))] for i in range(n)]

    def normalize(self, v) -> list[int]:
        return [x % d if d else x for x, d in zip(v, self.orders)]

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def __add__(self, other: "FgAbelianGroup") -> "FgAbelianGroup":
        return FgAbelianGroup.from_orders(self.torsion + other.torsion, self.free_rank + other.free_rank)

    def to_dict(self) -> dict:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank}

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


TRIVIAL = FgAbelianGroup()


def in_subgroup(v, gens: IntMatrix, k: int, group: FgAbelianGroup) -> bool:
    """Is ``v`` in the subgroup generated by the ``k`` columns of ``gens``?"""
    n = group.ngens
    if n == 0:
        return True
    r = len(group.torsion)
    rel = group.relations()
    big = [list(gens[i][:k]) + list(rel[i][:r]) for i in range(n)]
    return solve_integer(big, list(v), k + r) is not None


def _columns(m: IntMatrix, cols: int) -> list[list[int]]:
    return [[row[j] for row in m] for j in range(cols)]


@dataclass
class Cokernel:
    """``Z^rows / A Z^cols`` with coordinates for the quotient map."""

    group: FgAbelianGroup
    snf: SmithForm
    rows: int
    # positions in the SNF diagonal that survive as torsion or free coordinates
    _keep: list[int] = field(default_factory=list)

    def coordinates(self, z) -> list[int]:
        """Class of ``z`` in invariant-factor coordinates (torsion reduced)."""
        y = matvec(self.snf.U_inv, z)
        return self.group.normalize([y[i] for i in self._keep])

    def lift(self, coords) -> list[int]:
        y = [0] * self.rows
        for i, c in zip(self._keep, coords):
            y[i] = c
        return matvec(self.snf.U, y)


def cokernel(a: IntMatrix, cols: int | None = None) -> Cokernel:
    rows = len(a)
    if cols is None:
        cols = len(a[0]) if rows else 0
    s = smith_normal_form(a, cols)
    diag = s.diagonal + [0] * (rows - len(s.diagonal))
    tors = [i for i, d in enumerate(diag) if d > 1]
    free = [i for i, d in enumerate(diag) if d == 0]
    group = FgAbelianGroup(tuple(diag[i] for i in tors), len(free))
    return Cokernel(group=group, snf=s, rows=rows, _keep=tors + free)


def hom_ext_to_Z(g: FgAbelianGroup) -> tuple[FgAbelianGroup, FgAbelianGroup]:
    """``(Hom(G, Z), Ext(G, Z))``."""
    return FgAbelianGroup((), g.free_rank), FgAbelianGroup(g.torsion, 0)


@dataclass
class GroupHom:
    """Homomorphism given by its matrix on the standard generators."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        rows, cols = len(self.matrix), (len(self.matrix[0]) if self.matrix else 0)
        if rows != self.target.ngens or (rows and cols != self.source.ngens):
            raise InputError("matrix shape does not match source/target generators")
        for j, d in enumerate(self.source.orders):
            if d == 0:
                continue
            col = [d * self.matrix[i][j] for i in range(rows)]
            if any(t == 0 and x != 0 or t and x % t for x, t in zip(col, self.target.orders)):
                raise InputError(f"generator {j} of order {d} is not mapped to a {d}-torsion element")

    def __call__(self, v) -> list[int]:
        return self.target.normalize(matvec(self.matrix, v))


@dataclass
class LimitResult:
    group: FgAbelianGroup | None
    stage: int | None
    status: str  # "stable" or "undetermined"


def _image_presentation(f: GroupHom) -> tuple[IntMatrix, int]:
    # columns of the matrix generate the image
    return f.matrix, f.source.ngens


def _kernel_generators(gens: IntMatrix, k: int, group: FgAbelianGroup) -> list[list[int]]:
    """Generators of ``{x in Z^k : gens x in relations}``."""
    n = group.ngens
    r = len(group.torsion)
    if n == 0:
        return [[int(i == j) for i in range(k)] for j in range(k)]
    rel = group.relations()
    big = [list(gens[i][:k]) + [-x for x in rel[i][:r]] for i in range(n)]
    return [v[:k] for v in kernel_basis(big, k + r)]


def inductive_limit(groups: list[FgAbelianGroup], maps: list[GroupHom]) -> LimitResult:
    """Limit of ``G_0 -> G_1 -> ...`` when the tower visibly stabilizes.

    With ``I_t`` the image of ``G_{t-1}`` in ``G_t``, the tower is declared stable
    from stage ``s`` when every provided restriction ``I_t -> I_{t+1}`` (``t >= s``)
    is an isomorphism; the limit is then ``I_s``.  Otherwise the result is
    ``"undetermined"``.
    """
    if len(maps) != len(groups) - 1:
        raise InputError("need exactly one map between consecutive groups")
    for t, f in enumerate(maps):
        if f.source != groups[t] or f.target != groups[t + 1]:
            raise InputError(f"map {t} does not connect groups {t} and {t + 1}")
    T = len(groups) - 1
    if T < 2:
        return LimitResult(None, None, "undetermined")

    def restriction_is_iso(t: int) -> bool:
        # I_t = f_{t-1}(G_{t-1}) in G_t, restriction of f_t to I_t onto I_{t+1}
        S, k = _image_presentation(maps[t - 1])
        F = maps[t].matrix
        G_t, G_next = groups[t], groups[t + 1]
        FS = matmul(F, S) if F and S and S[0] else zeros(G_next.ngens, k)
        S_next, k_next = _image_presentation(maps[t])
        for col in _columns(S_next, k_next):
            if not in_subgroup(col, FS, k, G_next):
                return False
        # injective on I_t: whatever F kills inside I_t was already zero in G_t
        return all(_in_relations(matvec(S, x), G_t) for x in _kernel_generators(FS, k, G_next))

    stable_from = None
    for t in range(T - 1, 0, -1):
        if restriction_is_iso(t):
            stable_from = t
        else:
            break
    if stable_from is None:
        return LimitResult(None, None, "undetermined")
    S, k = _image_presentation(maps[stable_from - 1])
    K = _kernel_generators(S, k, groups[stable_from])
    kmat = [[v[i] for v in K] for i in range(k)]
    grp = cokernel(kmat, len(K)).group if k else TRIVIAL
    return LimitResult(grp, stable_from, "stable")


def _in_relations(v, group: FgAbelianGroup) -> bool:
    return all((x % d == 0) if d else x == 0 for x, d in zip(v, group.orders))


def to_csv(a: IntMatrix, cols: int | None = None) -> str:
    """``"rows cols"`` header line followed by one comma-separated line per row."""
    rows, c = shape(a)
    c = c if cols is None else cols
    lines = [f"{rows} {c}"] + [",".join(str(x) for x in row) for row in a]
    return "\n".join(lines) + "\n"


def from_csv(text: str) -> IntMatrix:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty matrix text")
    try:
        rows, cols = (int(t) for t in lines[0].split())
        out = [[int(t) for t in ln.split(",")] for ln in lines[1:]]
    except ValueError as exc:
        raise InputError(f"malformed matrix CSV: {exc}") from None
    if len(out) != rows or any(len(r) != cols for r in out):
        raise InputError(f"matrix body does not match header {rows} {cols}")
    return out
