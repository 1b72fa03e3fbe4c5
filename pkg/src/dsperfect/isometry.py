"""格同构与自同构群阶: 短向量候选 + 内积指纹剪枝 + 基像回溯

自同构群阶按稳定化子链计算: |Aut| = Π_i |Stab(b_0..b_{i-1}) 下 b_i 的轨道|,
轨道即能延拓成完整自同构的候选像集合。
"""
from __future__ import annotations
from collections import Counter
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .linalg import integral_scaling
from .utils import logger

__all__ = ["find_isometry", "automorphism_count"]


class _Frame:
    """一个格的枚举数据: 约化基, 候选短向量及其整数内积表。"""

    def __init__(self, L, cap: Fraction) -> None:
        from .lattice_core import short_vectors
        self.L = L
        self.n = L.dim
        self.d, self.Gi = L.int_gram()
        vecs: List[Tuple[int, ...]] = []
        for _, reps in short_vectors(L, cap).items():
            for v in reps:
                vecs.append(v)
                vecs.append(tuple(-x for x in v))
        self.V = np.array(vecs, dtype=np.int64).reshape(len(vecs), self.n)
        G = np.array(self.Gi, dtype=np.int64)
        self.IP = self.V @ G @ self.V.T
        self.norms = np.diag(self.IP).copy()
        self.index = {tuple(int(x) for x in row): k for k, row in enumerate(self.V)}

    def fingerprint(self, k: int) -> Tuple[Tuple[int, int, int], ...]:
        pairs = Counter(zip(self.norms.tolist(), self.IP[k].tolist()))
        return tuple(sorted((a, b, c) for (a, b), c in pairs.items()))


def _reduced_basis(L) -> Tuple[List[List[int]], List[List[int]], Fraction]:
    T, Gr = L.lll()
    d, Gri = integral_scaling(Gr)
    cap = max(Gr[i][i] for i in range(L.dim))
    return T, Gri, cap


class _Search:
    def __init__(self, src, dst) -> None:
        self.n = src.dim
        self.T, _, cap = _reduced_basis(src)
        self.src = _Frame(src, cap)
        self.dst = self.src if dst is src else _Frame(dst, cap)
        if self.src.d != self.dst.d:
            self.candidates: List[List[int]] = [[] for _ in range(self.n)]
            return
        G = np.array(self.src.Gi, dtype=np.int64)
        B = np.array(self.T, dtype=np.int64)
        self.BG = B @ G @ B.T
        fp_cache: Dict[int, tuple] = {}
        self.candidates = []
        for i in range(self.n):
            k = self.src.index[tuple(int(x) for x in self.T[i])]
            target = self.src.fingerprint(k)
            cands = []
            for j in np.nonzero(self.dst.norms == self.BG[i, i])[0].tolist():
                if j not in fp_cache:
                    fp_cache[j] = self.dst.fingerprint(j)
                if fp_cache[j] == target:
                    cands.append(j)
            self.candidates.append(cands)

    def extend(self, chosen: List[int]) -> Optional[List[int]]:
        """在给定前缀下寻找一个完整的基像赋值。"""
        i = len(chosen)
        if i == self.n:
            return list(chosen)
        for j in self.candidates[i]:
            if all(self.dst.IP[j, chosen[t]] == self.BG[i, t] for t in range(i)):
                chosen.append(j)
                found = self.extend(chosen)
                chosen.pop()
                if found is not None:
                    return found
        return None

    def image_matrix(self, assignment: Sequence[int]) -> List[List[int]]:
        """映射矩阵 M (行为原坐标 e_i 的像在目标坐标下的表示)。"""
        from .linalg import inverse
        X = [[int(x) for x in self.dst.V[j]] for j in assignment]
        Tinv = inverse(self.T)
        M = [[sum(Tinv[i][k] * X[k][c] for k in range(self.n)) for c in range(self.n)] for i in range(self.n)]
        return [[int(x) for x in row] for row in M]


def find_isometry(L1, L2) -> Optional[List[List[int]]]:
    """返回 L1 → L2 的一个等距 (整数矩阵, 满足 M·G2·M^T = G1), 不存在则返回 None。"""
    if L1.dim != L2.dim or L1.det != L2.det:
        return None
    search = _Search(L1, L2)
    if any(not c for c in search.candidates):
        return None
    found = search.extend([])
    if found is None:
        return None
    return search.image_matrix(found)


def automorphism_count(L) -> int:
    search = _Search(L, L)
    identity_images = [search.src.index[tuple(int(x) for x in row)] for row in search.T]
    order = 1
    for i in range(search.n):
        prefix = identity_images[:i]
        orbit = 0
        for j in search.candidates[i]:
            if all(search.dst.IP[j, prefix[t]] == search.BG[i, t] for t in range(i)):
                if search.extend(prefix + [j]) is not None:
                    orbit += 1
        order *= orbit
        logger.debug("自同构稳定化子链: 第 %d 层轨道长 %d", i, orbit)
    return order
