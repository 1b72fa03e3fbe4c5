"""命名格目录: 根格 A_n/D_n/E_n, 一维格 (a), L4, f1, 正交和与伸缩

名字语法 (空白忽略):
    E6+E8            正交和
    (2)              一维格, Gram (2)
    2/3*A8           范数伸缩
    A2*              对偶
    G2(3)            14 维 [±G2(3)] 格 (最小 4 的偶标度)
    file:路径        显式 Gram 文件
"""
from __future__ import annotations
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import re

from .lattice_core import Lattice, dual, orthogonal_sum, rescale
from .utils import format_rational, logger, parse_rational

__all__ = [
    "catalog", "root_lattice", "one_dim", "CATALOG_METADATA", "L4_GRAM", "F1_GRAM",
    "S32_BLOCKS", "s32_gram", "s32_block_choices", "data_dir", "g2_3",
]

# 4 维极大偶格, 行列式 5^2
L4_GRAM: List[List[int]] = [
    [2, 1, 1, 1],
    [1, 2, 0, 1],
    [1, 0, 4, 2],
    [1, 1, 2, 4],
]
# 用于 Fricke 像的辅助二元型 f1
F1_GRAM: List[List[int]] = [[4, 1], [1, 4]]

# 名字 -> (行列式, 最小范数, 亲吻数); 加载时逐项复核
CATALOG_METADATA: Dict[str, Tuple[Fraction, Fraction, Optional[int]]] = {
    'A2': (Fraction(3), Fraction(2), 6),
    'A5': (Fraction(6), Fraction(2), 30),
    'E6': (Fraction(3), Fraction(2), 72),
    'E7': (Fraction(2), Fraction(2), 126),
    'E8': (Fraction(1), Fraction(2), 240),
    'D12': (Fraction(4), Fraction(2), 264),
    'D14': (Fraction(4), Fraction(2), 364),
    'A14': (Fraction(15), Fraction(2), 210),
    'L4': (Fraction(25), Fraction(2), None),
    'f1': (Fraction(15), Fraction(4), 4),
    'E6+E8': (Fraction(3), Fraction(2), 312),
    'G2(3)': (Fraction(3 ** 7), Fraction(4), 756),
}

_SCALED = re.compile(r"^(\d+(?:/\d+)?)\*(.+)$")
_ROOT = re.compile(r"^([ADE])(\d+)$")
_ONE = re.compile(r"^\((\d+(?:/\d+)?)\)$")
_ZN = re.compile(r"^Z(\d+)$")


def data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"

# ---------------- 根格 ----------------

def _cartan_edges(kind: str, n: int) -> List[Tuple[int, int]]:
    if kind == 'A':
        return [(i, i + 1) for i in range(n - 1)]
    if kind == 'D':
        if n < 3:
            raise ValueError("D_n 需要 n ≥ 3")
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if kind == 'E':
        if n not in (6, 7, 8):
            raise ValueError(f"E_{n} 不存在")
        # Bourbaki 编号: 1-3-4-5-6-7-8 链, 2 接在 4 上
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        return [(a, b) for a, b in zip(chain, chain[1:])] + [(1, 3)]
    raise ValueError(f"未知根系类型 {kind}")


def root_lattice(kind: str, n: int) -> Lattice:
    """以单根为基的根格, Gram 为 Cartan 矩阵 (对角 2, 相邻 −1)。"""
    if n < 1:
        raise ValueError("秩必须为正")
    G = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in _cartan_edges(kind, n):
        G[a][b] = G[b][a] = -1
    return Lattice(G, label=f"{kind}{n}")


def one_dim(a) -> Lattice:
    a = parse_rational(str(a))
    return Lattice([[a]], label=f"({format_rational(a)})")

# ---------------- 名字解析 ----------------

def _atom(token: str) -> Lattice:
    if token.endswith('*'):
        return dual(_atom(token[:-1]))
    m = _SCALED.match(token)
    if m:
        return rescale(_atom(m.group(2)), parse_rational(m.group(1)))
    m = _ROOT.match(token)
    if m:
        return root_lattice(m.group(1), int(m.group(2)))
    m = _ONE.match(token)
    if m:
        return one_dim(m.group(1))
    m = _ZN.match(token)
    if m:
        k = int(m.group(1))
        return Lattice([[int(i == j) for j in range(k)] for i in range(k)], label=f"Z{k}")
    if token == 'L4':
        return Lattice(L4_GRAM, label="L4")
    if token == 'f1':
        return Lattice(F1_GRAM, label="f1")
    if token == 'G2(3)':
        return g2_3()
    raise ValueError(f"未知格名: {token!r}")


def _check_metadata(name: str, L: Lattice) -> None:
    meta = CATALOG_METADATA.get(name)
    if meta is None:
        return
    det, m, kiss = meta
    if L.det != det:
        raise ValueError(f"{name}: 行列式 {format_rational(L.det)} 与记录 {format_rational(det)} 不符")
    if L.minimum != m:
        raise ValueError(f"{name}: 最小范数 {format_rational(L.minimum)} 与记录 {format_rational(m)} 不符")
    if kiss is not None and L.kissing_number != kiss:
        raise ValueError(f"{name}: 亲吻数 {L.kissing_number} 与记录 {kiss} 不符")


def catalog(name: str, validate: bool = True) -> Lattice:
    """按名字构造格; validate 时按 CATALOG_METADATA 复核行列式、最小范数与亲吻数。"""
    name = re.sub(r"\s+", "", name)
    if not name:
        raise ValueError("格名为空")
    if name.startswith('file:'):
        return Lattice.load(name[5:])
    if name == 'G2(3)':
        L = g2_3()
    else:
        parts = [_atom(tok) for tok in name.split('+')]
        L = parts[0] if len(parts) == 1 else orthogonal_sum(*parts, label=name)
        if len(parts) == 1 and not L.label:
            L.label = name
    if validate:
        _check_metadata(name, L)
    return L

# ---------------- [±G2(3)] ----------------

_G2_3_FILE = "g2_3_14.gram"


def g2_3(cache: bool = True) -> Lattice:
    """[±G2(3)]_14, 最小 4 的偶标度; 优先读取随包 Gram 文件, 否则在 E6⊥E8 中搜索构造。"""
    path = data_dir() / _G2_3_FILE
    if path.exists():
        L = Lattice.load(path)
        L.label = "G2(3)"
        return L
    from .neighbors import g2_3_from_e6e8
    L = g2_3_from_e6e8()
    L.label = "G2(3)"
    if cache:
        try:
            L.save(path)
            logger.info("已写出 %s", path)
        except OSError as exc:
            logger.warning("无法缓存 G2(3) Gram 文件: %s", exc)
    return L

# ---------------- s1 = 32 情形的 Gram 矩阵 ----------------

S32_BLOCKS: Dict[str, List[List[Fraction]]] = {
    'A': [[Fraction(v, 12) for v in row] for row in ([4, 1, 1, 2], [1, 4, 2, 1], [1, 2, 4, 1], [2, 1, 1, 4])],
    'B': [[Fraction(v, 24) for v in row] for row in ([8, 1, 3, 4], [1, 8, 4, 3], [3, 4, 8, 1], [4, 3, 1, 8])],
    'C': [[Fraction(v, 24) for v in row] for row in ([8, 3, 3, 2], [3, 8, 2, 3], [3, 2, 8, 3], [2, 3, 3, 8])],
}


def s32_block_choices() -> List[str]:
    """四个分量各取 A/B/C 的 15 种多重集, 首字母为完整 4×4 块。"""
    return ["".join(c) for c in combinations_with_replacement("ABC", 4)]


def s32_gram(blocks: str = "AAAA") -> List[List[Fraction]]:
    """N₂(β) 的 13 个向量加 α₀ 的 14×14 Gram: 首块取完整 4×4, 其余三块取左上 3×3,
    块间内积 1/6, 与 α₀ 的内积 1, α₀ 范数 16。"""
    if len(blocks) != 4 or any(b not in S32_BLOCKS for b in blocks):
        raise ValueError(f"块选择须为 4 个 A/B/C 字母: {blocks!r}")
    sizes = [4, 3, 3, 3]
    n = sum(sizes) + 1
    M = [[Fraction(1, 6)] * n for _ in range(n)]
    off = 0
    for b, k in zip(blocks, sizes):
        blk = S32_BLOCKS[b]
        for i in range(k):
            for j in range(k):
                M[off + i][off + j] = blk[i][j]
        off += k
    for i in range(n - 1):
        M[i][n - 1] = M[n - 1][i] = Fraction(1)
    M[n - 1][n - 1] = Fraction(16)
    return M
