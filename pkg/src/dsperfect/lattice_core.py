"""精确有理 Gram 矩阵格: 对偶/伸缩/子格代数, 短向量枚举, 初等因子, 行列式界

枚举采用 Fincke-Pohst 回溯: 先做精确 LLL, 浮点 Cholesky 只用于剪枝范围
(带松弛量), 每个候选向量的范数都用整数精确复核。
"""
from __future__ import annotations
from fractions import Fraction
from math import floor, sqrt
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
import threading

import numpy as np

from .linalg import (
    Matrix, cholesky_float, determinant, fraction_matrix, hermite_basis, integral_scaling,
    inverse, ldl_pivots, lll_gram, mat_mul, smith_form, transpose,
)
from .models import Layer, SublatticeSpec
from .utils import RationalLike, as_fraction, format_rational, logger, parse_rational, squarefree_part

__all__ = [
    "Lattice", "dual", "rescale", "orthogonal_sum", "sublattice", "short_vectors",
    "minimum_and_layer", "layer", "elementary_divisors", "dual_subset_divisor", "det_bounds",
    "parity_sublattices", "square_class", "is_isometric", "aut_order", "canonical_sign",
]

Vector = Tuple[int, ...]


class Lattice:
    """正定有理 Gram 矩阵表示的格, 构造后不可变; 不变量惰性缓存。"""

    def __init__(self, gram: Sequence[Sequence[RationalLike]], label: Optional[str] = None) -> None:
        G = [[as_fraction(x) if not isinstance(x, Fraction) else x for x in row] for row in gram]
        n = len(G)
        if n < 1 or any(len(row) != n for row in G):
            raise ValueError("Gram 矩阵必须是非空方阵")
        if any(G[i][j] != G[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram 矩阵必须对称")
        pivots = ldl_pivots(G)
        if len(pivots) < n or any(p <= 0 for p in pivots):
            raise ValueError("Gram 矩阵不是正定的 (顺序主子式非全正)")
        self._gram: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(row) for row in G)
        self.label = label or ""
        self._cache: Dict[str, object] = {}
        self._lock = threading.Lock()
        det = Fraction(1)
        for p in pivots:
            det *= p
        self._cache['det'] = det

    # ---------------- 基本属性 ----------------

    @property
    def dim(self) -> int:
        return len(self._gram)

    @property
    def gram(self) -> List[List[Fraction]]:
        return [list(row) for row in self._gram]

    def entry(self, i: int, j: int) -> Fraction:
        return self._gram[i][j]

    @property
    def det(self) -> Fraction:
        return self._cache['det']  # type: ignore[return-value]

    def _cached(self, key: str, fn):
        if key not in self._cache:
            value = fn()
            with self._lock:
                self._cache.setdefault(key, value)
        return self._cache[key]

    def inner(self, x: Sequence[RationalLike], y: Sequence[RationalLike]) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = self._gram[i]
                total += xi * sum((row[j] * yj for j, yj in enumerate(y) if yj), Fraction(0))
        return Fraction(total)

    def norm(self, x: Sequence[RationalLike]) -> Fraction:
        return self.inner(x, x)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self._gram for x in row)

    def is_even(self) -> bool:
        return self.is_integral() and all(self._gram[i][i].numerator % 2 == 0 for i in range(self.dim))

    def int_gram(self) -> Tuple[int, List[List[int]]]:
        """(d, d·G) , d 为使 Gram 整数化的最小正整数。"""
        return self._cached('int_gram', lambda: integral_scaling(self._gram))  # type: ignore[return-value]

    def lll(self) -> Tuple[List[List[int]], Matrix]:
        return self._cached('lll', lambda: lll_gram(self._gram))  # type: ignore[return-value]

    @property
    def minimum(self) -> Fraction:
        return minimum_and_layer(self)[0]

    @property
    def kissing_number(self) -> int:
        return minimum_and_layer(self)[1].count

    def same_gram(self, other: "Lattice") -> bool:
        return self._gram == other._gram

    def __repr__(self) -> str:
        name = f" {self.label}" if self.label else ""
        return f"<Lattice{name} dim={self.dim} det={format_rational(self.det)}>"

    # ---------------- 文本格式 ----------------

    def to_text(self) -> str:
        lines = []
        if self.label:
            lines.append(f"label: {self.label}")
        lines.append(str(self.dim))
        for row in self._gram:
            lines.append(" ".join(format_rational(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Lattice":
        label = None
        tokens: List[str] = []
        for raw in text.splitlines():
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if line.lower().startswith('label:'):
                label = line.split(':', 1)[1].strip()
                continue
            tokens.extend(line.split())
        if not tokens:
            raise ValueError("格文件为空")
        try:
            n = int(tokens[0])
        except ValueError:
            raise ValueError(f"格文件首项应为维数: {tokens[0]!r}")
        entries = tokens[1:]
        if n < 1 or len(entries) != n * n:
            raise ValueError(f"格文件需要 {n}x{n} 个矩阵元, 实际 {len(entries)}")
        vals = [parse_rational(t) for t in entries]
        return cls([vals[i * n:(i + 1) * n] for i in range(n)], label=label)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Lattice":
        return cls.from_text(Path(path).read_text(encoding='utf-8'))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_text(), encoding='utf-8')

    def dual(self) -> "Lattice":
        return dual(self)

    def rescale(self, c: RationalLike) -> "Lattice":
        return rescale(self, c)

# ---------------- 代数运算 ----------------

def dual(L: Lattice) -> Lattice:
    """对偶格, Gram 为逆矩阵。"""
    label = f"{L.label}*" if L.label else ""
    return Lattice(inverse(L.gram), label=label)


def rescale(L: Lattice, c: RationalLike) -> Lattice:
    """范数乘以 c (即向量长度乘以 √c)。"""
    c = as_fraction(c)
    if c <= 0:
        raise ValueError("伸缩因子必须为正")
    label = f"{format_rational(c)}*{L.label}" if L.label else ""
    return Lattice([[c * x for x in row] for row in L.gram], label=label)


def orthogonal_sum(*parts: Lattice, label: Optional[str] = None) -> Lattice:
    n = sum(p.dim for p in parts)
    G = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.dim):
            for j in range(p.dim):
                G[off + i][off + j] = p.entry(i, j)
        off += p.dim
    return Lattice(G, label=label or "+".join(p.label for p in parts if p.label))


def sublattice(L: Lattice, generators: Iterable[Sequence[int]], label: str = "") -> SublatticeSpec:
    """由整数生成元给出的满秩子格; 指数由 Hermite 基行列式给出。"""
    gens = [tuple(int(v) for v in g) for g in generators]
    basis = hermite_basis(gens)
    if len(basis) != L.dim:
        raise ValueError("生成元不满秩, 不是有限指数子群")
    index = 1
    for i, row in enumerate(basis):
        index *= next(v for v in row if v != 0)
    return SublatticeSpec(parent=L, generators=gens, basis=[tuple(r) for r in basis], index=abs(index), label=label)


def sublattice_gram(L: Lattice, basis: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    B = [list(r) for r in basis]
    return mat_mul(mat_mul(B, L.gram), transpose(B))

# ---------------- 短向量枚举 ----------------

def canonical_sign(v: Sequence[int]) -> Vector:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def _fincke_pohst(L: Lattice, bound: Fraction) -> List[Tuple[int, Vector]]:
    """所有满足 0 < N(x) ≤ bound 的向量 (每对 ±x 一个), 返回 (d·N(x), x) 列表, d 见 int_gram。"""
    T, Gr = L.lll()
    d, Gi = integral_scaling(Gr)
    n = L.dim
    Bi = floor(bound * d)
    if Bi <= 0:
        return []
    qd, qmu = cholesky_float(Gi)
    eps = 1e-7 * (1.0 + Bi)
    limit = Bi + eps
    y = [0] * n
    # h[i] = Σ_{k>i} Gi[i][k]·y_k, 精确整数
    h = [0] * n
    exact = [0] * (n + 1)
    partial = [0.0] * (n + 1)
    out: List[Tuple[int, Vector]] = []
    Tcols = T

    def assign(i: int, val: int) -> None:
        delta = val - y[i]
        if delta:
            y[i] = val
            for k in range(i):
                h[k] += Gi[k][i] * delta

    def center(i: int) -> float:
        return -sum(qmu[i][j] * y[j] for j in range(i + 1, n) if y[j])

    def rec(i: int, above_zero: bool) -> None:
        c = center(i)
        room = limit - partial[i + 1]
        if room < 0:
            return
        w = sqrt(room / qd[i])
        lo = int(np.ceil(c - w))
        hi = int(np.floor(c + w))
        if above_zero:
            lo = max(lo, 0 if i > 0 else 1)
        for v in range(lo, hi + 1):
            assign(i, v)
            e = exact[i + 1] + Gi[i][i] * v * v + 2 * v * h[i]
            if e > Bi and i == 0:
                continue
            exact[i] = e
            partial[i] = partial[i + 1] + qd[i] * (v - c) ** 2
            if i == 0:
                if e > 0:
                    x = [0] * n
                    for k in range(n):
                        if y[k]:
                            row = Tcols[k]
                            for j in range(n):
                                x[j] += y[k] * row[j]
                    out.append((e, canonical_sign(x)))
            else:
                rec(i - 1, above_zero and v == 0)
        assign(i, 0)

    rec(n - 1, True)
    return out


def short_vectors(L: Lattice, bound: RationalLike) -> Dict[Fraction, List[Vector]]:
    """范数 ≤ bound 的全部非零向量, 按范数分组, 每组代表按字典序排序。"""
    bound = as_fraction(bound)
    _, Gr = L.lll()
    d, _ = integral_scaling(Gr)
    found = _fincke_pohst(L, bound)
    layers: Dict[Fraction, List[Vector]] = {}
    for e, x in found:
        layers.setdefault(Fraction(e, d), []).append(x)
    for k in layers:
        layers[k].sort()
    logger.debug("短向量枚举: dim=%d bound=%s 层数=%d 向量对=%d", L.dim, format_rational(bound), len(layers), len(found))
    return dict(sorted(layers.items()))


def minimum_and_layer(L: Lattice, bound: Optional[RationalLike] = None) -> Tuple[Fraction, Layer]:
    """精确最小范数及最小层; bound 仅用于剪枝, 不影响结果。"""
    def compute():
        _, Gr = L.lll()
        cap = min(Gr[i][i] for i in range(L.dim))
        tries = [as_fraction(bound)] if bound is not None and as_fraction(bound) < cap else []
        tries.append(cap)
        for b in tries:
            layers = short_vectors(L, b)
            if layers:
                m = next(iter(layers))
                return m, Layer(norm=m, vectors=layers[m])
        raise RuntimeError("枚举未找到最小向量")  # 基向量本身满足界, 不应发生
    if bound is None:
        return L._cached('min_layer', compute)  # type: ignore[return-value]
    return compute()


def layer(L: Lattice, a: RationalLike) -> Layer:
    a = as_fraction(a)
    if a <= 0:
        raise ValueError("层范数必须为正")
    layers = short_vectors(L, a)
    return Layer(norm=a, vectors=layers.get(a, []))

# ---------------- 初等因子与行列式界 ----------------

def elementary_divisors(M: Sequence[Sequence[RationalLike]]) -> List[Fraction]:
    """有理方阵的 Smith 对角 d1 | d2 | ... (有理意义)。"""
    A = fraction_matrix(M)
    if determinant(A) == 0:
        raise ValueError("矩阵奇异, 初等因子无定义")
    d, Ai = integral_scaling(A)
    diag, _, _ = smith_form(Ai)
    return [Fraction(abs(x), d) for x in diag]


def dual_subset_divisor(F: Sequence[Sequence[RationalLike]]) -> int:
    """F 的初等因子分母之积; 整 Γ 且 X ⊂ Γ* 线性无关时整除 det(Γ)。"""
    A = fraction_matrix(F)
    pivots = ldl_pivots(A)
    if len(pivots) < len(A) or any(p <= 0 for p in pivots) or any(A[i][j] != A[j][i] for i in range(len(A)) for j in range(i)):
        raise ValueError("dual_subset_divisor 需要对称正定矩阵")
    out = 1
    for e in elementary_divisors(A):
        out *= e.denominator
    return out


def det_bounds(n: int, m: RationalLike, r: RationalLike, b: RationalLike) -> Tuple[Fraction, Fraction]:
    """((m/b)^n, (b/r)^n): det(Γ) 的上下界, m = min Γ, r = min Γ*, b ≥ γ_n。"""
    m, r, b = as_fraction(m), as_fraction(r), as_fraction(b)
    if m <= 0 or r <= 0:
        raise ValueError("m 与 r 必须为正")
    return (m / b) ** n, (b / r) ** n


def square_class(d: RationalLike) -> int:
    return squarefree_part(d)

# ---------------- Γ^(e), Γ^(t) ----------------

def _residue_kernel(L: Lattice, p: int, classes: List[Vector]) -> SublatticeSpec:
    n = L.dim
    gens = list(classes) + [tuple(p if j == i else 0 for j in range(n)) for i in range(n)]
    return sublattice(L, gens)


def parity_sublattices(L: Lattice) -> Tuple[SublatticeSpec, Optional[SublatticeSpec]]:
    """Γ^(e) = {范数偶} 与 Γ^(t) = {范数 ≡ 0 mod 3}; 后者在假设不成立时返回 None。"""
    n = L.dim
    d, Gi = L.int_gram()
    v2 = 0
    while d % 2 == 0:
        d //= 2
        v2 += 1
    if v2 > 0 and any((Gi[i][j] * (1 if i == j else 2)) % (2 ** v2) for i in range(n) for j in range(n)):
        raise ValueError("范数不是 2-整的, Γ^(e) 无定义")
    if n > 20:
        raise ValueError("维数过大, 不做模 2 剩余类穷举")
    _, Gi = L.int_gram()
    target = 2 ** (v2 + 1)
    # 所有模 2 剩余类一次性计算 d·N(c) mod 2^(v2+1)
    Gm = np.array([[x % target for x in row] for row in Gi], dtype=np.int64)
    idx = np.arange(2 ** n, dtype=np.int64)
    C = (idx[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1
    vals = np.einsum('ij,jk,ik->i', C, Gm, C) % target
    even_classes = [tuple(int(x) for x in C[k]) for k in np.nonzero(vals == 0)[0]]
    even = _residue_kernel(L, 2, even_classes)
    if even.index * len(even_classes) != 2 ** n:
        raise ValueError("偶范数向量不构成子群")
    even.label = "even"
    if even.index not in (1, 2, 4):
        logger.warning("Γ^(e) 指数 %d 不在 {1,2,4} 中", even.index)

    trace = None
    d3, Gi3 = L.int_gram()
    if d3 % 3 == 0:
        logger.info("范数不是 3-整的, 不构造 Γ^(t)")
        return even, None
    inv = pow(d3, -1, 3)
    Gm = [[(x * inv) % 3 for x in row] for row in Gi3]
    for i in range(n):
        for j in range(n):
            if (Gm[i][j] ** 2 - Gm[i][i] * Gm[j][j]) % 3:
                logger.info("Γ^(t) 假设 (α,β)^2 − (α,α)(β,β) ∈ 3Z_3 在基 (%d,%d) 上不成立", i, j)
                return even, None
    rank_rows = _rank_mod_p(Gm, 3)
    if rank_rows > 1:
        logger.info("Gram 模 3 的秩为 %d > 1, 范数 ≡ 0 的向量不成子格", rank_rows)
        return even, None
    # 秩 ≤ 1: N(x) ≡ c·λ(x)^2, 核为 λ 的零化子
    lam = next((row for row in Gm if any(row)), None)
    if lam is None:
        trace = sublattice(L, [tuple(int(i == j) for j in range(n)) for i in range(n)], label="trace3")
    else:
        gens: List[Vector] = []
        piv = next(j for j in range(n) if lam[j])
        for j in range(n):
            if j == piv:
                continue
            v = [0] * n
            v[j] = 1
            v[piv] = (-lam[j] * pow(lam[piv], -1, 3)) % 3
            gens.append(tuple(v))
        gens.append(tuple(3 if j == piv else 0 for j in range(n)))
        trace = sublattice(L, gens, label="trace3")
    return even, trace


def _rank_mod_p(M: Sequence[Sequence[int]], p: int) -> int:
    A = [[x % p for x in row] for row in M]
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        r += 1
    return r

# ---------------- 同构与自同构 ----------------

def is_isometric(L1: Lattice, L2: Lattice) -> bool:
    from .isometry import find_isometry
    return find_isometry(L1, L2) is not None


def aut_order(L: Lattice) -> int:
    from .isometry import automorphism_count
    return L._cached('aut_order', lambda: automorphism_count(L))  # type: ignore[return-value]
