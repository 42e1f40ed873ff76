"""Hand-transcribed symbolic matrices shared by the matrix tests."""

# Transposed symbolic matrices, rows = level l+1 basis, cols = level l basis.
# "A" is the sum of all alpha symbols.
MT_L2 = [
    ["b+c", "A", "0", "0", "0", "0", "0"],
    ["0", "A", "0", "c", "0", "0", "b"],
    ["c", "A", "0", "0", "0", "0", "b"],
    ["0", "0", "b", "0", "0", "c", "0"],
    ["c", "0", "b", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "b", "c", "0"],
    ["c", "0", "0", "0", "b", "0", "0"],
    ["0", "0", "0", "0", "0", "c", "b"],
    ["c", "0", "0", "0", "0", "0", "b"],
]

MT_L3 = [
    ["b+c", "A", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "A", "0", "c", "0", "0", "0", "0", "b"],
    ["c", "A", "0", "0", "0", "0", "0", "0", "b"],
    ["0", "0", "b", "0", "0", "c", "0", "0", "0"],
    ["c", "0", "b", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "b", "0", "0", "c", "0"],
    ["c", "0", "0", "0", "b", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "b", "c", "0"],
    ["c", "0", "0", "0", "0", "0", "b", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "c", "b"],
    ["c", "0", "0", "0", "0", "0", "0", "0", "b"],
]


def render(entry, a):
    if entry == tuple(a.alphas):
        return "A"
    return {(): "0", (0,): "c", (1,): "b", (0, 1): "b+c"}[entry]


def it_fixture(l):
    # identity on the first 2l+1 level-(l+1) rows, then E_l, F_l, Q_l, R_l collapse
    n_lo = 2 * l + 3
    rows = []
    for i in range(2 * l + 1):
        rows.append([int(i == j) for j in range(n_lo)])
    q, r = n_lo - 2, n_lo - 1
    for target in (q, r, q, r):
        rows.append([int(j == target) for j in range(n_lo)])
    return rows
