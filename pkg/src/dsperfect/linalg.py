"""精确线性代数内核 (Fraction / 任意精度整数)

矩阵统一用 ``List[List[Fraction]]`` 或 ``List[List[int]]`` 表示, 行优先。
浮点只出现在 ``cholesky_float`` 中, 供枚举剪枝使用。
"""
from __future__ import annotations
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "Matrix", "IntMatrix", "fraction_matrix", "identity", "transpose", "mat_mul", "mat_vec",
    "bilinear", "scale", "is_symmetric", "determinant", "ldl_pivots", "inverse", "rref", "rank",
    "nullspace", "solve", "denominator_lcm", "integral_scaling", "smith_form", "hermite_basis",
    "lll_gram", "cholesky_float", "ext_gcd",
]

Matrix = List[List[Fraction]]
IntMatrix = List[List[int]]


def fraction_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[x if isinstance(x, Fraction) else Fraction(x) for x in row] for row in rows]


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence[object]]) -> list:
    return [list(col) for col in zip(*M)]


def mat_mul(A: Sequence[Sequence[object]], B: Sequence[Sequence[object]]) -> list:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A: Sequence[Sequence[object]], v: Sequence[object]) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def bilinear(G: Sequence[Sequence[object]], x: Sequence[object], y: Sequence[object]):
    """x^T G y"""
    return sum(xi * sum(g * yj for g, yj in zip(row, y)) for xi, row in zip(x, G) if xi)


def scale(M: Sequence[Sequence[object]], c: object) -> list:
    return [[c * x for x in row] for row in M]


def is_symmetric(M: Sequence[Sequence[object]]) -> bool:
    n = len(M)
    return all(len(row) == n for row in M) and all(M[i][j] == M[j][i] for i in range(n) for j in range(i))


def determinant(M: Sequence[Sequence[object]]) -> Fraction:
    A = fraction_matrix(M)
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        p = A[c][c]
        det *= p
        for r in range(c + 1, n):
            f = A[r][c] / p
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def ldl_pivots(M: Sequence[Sequence[object]]) -> List[Fraction]:
    """无主元选取的 LDL^T 对角元; 全部 > 0 当且仅当所有顺序主子式 > 0。"""
    A = fraction_matrix(M)
    n = len(A)
    pivots: List[Fraction] = []
    for c in range(n):
        p = A[c][c]
        pivots.append(p)
        if p == 0:
            break
        for r in range(c + 1, n):
            f = A[r][c] / p
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return pivots


def inverse(M: Sequence[Sequence[object]]) -> Matrix:
    n = len(M)
    A = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(fraction_matrix(M))]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise ValueError("矩阵奇异, 无法求逆")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [a / p for a in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def rref(M: Sequence[Sequence[object]]) -> Tuple[Matrix, List[int]]:
    A = fraction_matrix(M)
    if not A:
        return A, []
    rows, cols = len(A), len(A[0])
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [a / p for a in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M: Sequence[Sequence[object]]) -> int:
    return len(rref(M)[1]) if M else 0


def nullspace(M: Sequence[Sequence[object]]) -> Matrix:
    """右零空间的一组基 (每个向量长度为列数)。"""
    R, pivots = rref(M)
    cols = len(M[0])
    free = [c for c in range(cols) if c not in pivots]
    basis: Matrix = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence[object]], b: Sequence[object]) -> Optional[List[Fraction]]:
    """求 A x = b 的一个解 (自由变量取 0); 无解返回 None。"""
    cols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, pc in enumerate(pivots):
        x[pc] = R[i][cols]
    return x


def denominator_lcm(M: Sequence[Sequence[object]]) -> int:
    d = 1
    for row in M:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def integral_scaling(M: Sequence[Sequence[object]]) -> Tuple[int, IntMatrix]:
    """返回 (d, d·M) 使 d·M 为整数矩阵, d 取最小。"""
    d = denominator_lcm(M)
    return d, [[int(Fraction(x) * d) for x in row] for row in M]

# ---------------- 整数矩阵: Smith / Hermite ----------------

def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """返回 (g, x, y) 使 x·a + y·b = g = gcd(a, b) ≥ 0。"""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_form(A: Sequence[Sequence[int]]) -> Tuple[List[int], IntMatrix, IntMatrix]:
    """整数 Smith 标准形: 返回 (diag, U, V) 使 U·A·V = diag (d1 | d2 | ...)。"""
    D = [[int(x) for x in row] for row in A]
    m, n = len(D), len(D[0])
    U = identity(m)
    V = identity(n)

    def swap_rows(i: int, j: int) -> None:
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return [D[i][i] for i in range(min(m, n))], U, V
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is not None:
                add_row(t, bad[0], 1)
                continue
            break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return [D[i][i] for i in range(min(m, n))], U, V


def hermite_basis(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """整数行向量生成的 Z-模的行 Hermite 标准形基 (去掉零行)。"""
    work = [[int(x) for x in r] for r in rows if any(r)]
    if not work:
        return []
    n = len(work[0])
    basis: IntMatrix = []
    pivcols: List[int] = []
    for col in range(n):
        pivot = None
        rest: IntMatrix = []
        for r in work:
            if r[col] == 0:
                rest.append(r)
            elif pivot is None:
                pivot = r
            else:
                a, b = pivot[col], r[col]
                g, x, y = ext_gcd(a, b)
                other = [(a // g) * q - (b // g) * p for p, q in zip(pivot, r)]
                pivot = [x * p + y * q for p, q in zip(pivot, r)]
                if any(other):
                    rest.append(other)
        if pivot is not None:
            if pivot[col] < 0:
                pivot = [-v for v in pivot]
            basis.append(pivot)
            pivcols.append(col)
        work = rest
    for i in range(len(basis)):
        pc, pv = pivcols[i], basis[i][pivcols[i]]
        for k in range(i):
            q = basis[k][pc] // pv
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]
    return basis

# ---------------- 约化与 Cholesky ----------------

def _gso(G: Matrix) -> Tuple[Matrix, List[Fraction]]:
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = G[i][j] - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
            mu[i][j] = s / bstar[j]
        bstar[i] = G[i][i] - sum(mu[i][k] * mu[i][k] * bstar[k] for k in range(i))
    return mu, bstar


def lll_gram(G: Sequence[Sequence[object]], delta: Fraction = Fraction(99, 100)) -> Tuple[IntMatrix, Matrix]:
    """Gram 矩阵上的精确 LLL。

    返回 (T, G') , T 为幺模整数矩阵 (行是新基在旧基下的坐标), G' = T·G·T^T。
    """
    Gc = fraction_matrix(G)
    n = len(Gc)
    T = identity(n)
    mu, bstar = _gso(Gc)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                T[k] = [a - q * b for a, b in zip(T[k], T[j])]
                for l in range(n):
                    Gc[k][l] -= q * Gc[j][l]
                for l in range(n):
                    Gc[l][k] -= q * Gc[l][j]
                for l in range(j):
                    mu[k][l] -= q * mu[j][l]
                mu[k][j] -= q
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            T[k], T[k - 1] = T[k - 1], T[k]
            Gc[k], Gc[k - 1] = Gc[k - 1], Gc[k]
            for row in Gc:
                row[k], row[k - 1] = row[k - 1], row[k]
            mu, bstar = _gso(Gc)
            k = max(k - 1, 1)
    return T, Gc


def cholesky_float(G: Sequence[Sequence[object]]) -> Tuple[np.ndarray, np.ndarray]:
    """返回 (qdiag, qmu) 使 x^T G x = Σ_i qdiag[i]·(x_i + Σ_{j>i} qmu[i, j]·x_j)^2 (浮点)。"""
    A = np.array([[float(x) for x in row] for row in G], dtype=float)
    L = np.linalg.cholesky(A)
    R = L.T
    diag = np.diag(R).copy()
    qmu = R / diag[:, None]
    return diag ** 2, qmu
