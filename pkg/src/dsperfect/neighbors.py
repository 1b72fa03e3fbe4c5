"""Kneser 邻格、亏格枚举 (质量证书)、极大偶上格与无平方因子指数子格下降

约定:
    - 邻格 N = L_v + Z·v/p, 其中 L_v = {x : (x,v) ≡ 0 mod p}, v 调整到 (v,v) ≡ 0 mod 2p^2。
    - 单个素数 p 的下降在 V = M/(M ∩ pM*) 上进行: L = W^⊥ 的原像, W 全迷向且其中每个非零类的
      陪集最小范数 ≥ p^2·dual_min_bound (即 min(L*) ≥ dual_min_bound)。
    - 指数 E = ∏p 时在每个 p 上分别下降, 再取 L = Σ (E/p)·L_p; L_p 在 p 处与 L 一致, 其余处等于 M。
"""
from __future__ import annotations
from fractions import Fraction
from itertools import product
from math import prod
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union
import json

import numpy as np
import sympy

from .constants import GAMMA14_BOUND, G2_3_DET, G2_3_DUAL_MIN, G2_3_KISSING, G2_3_MIN
from .genus_tools import discriminant_form, genus_symbol, isotropic_elements, jordan_symbol, mass
from .lattice_core import Lattice, aut_order, det_bounds, is_isometric, rescale, short_vectors
from .linalg import hermite_basis, inverse, smith_form
from .models import DescentResult, GenusEnumeration
from .utils import as_fraction, format_rational, logger, prime_divisors

__all__ = [
    "iter_neighbors", "kneser_neighbors", "enumerate_genus", "save_enumeration",
    "maximal_even_overlattices", "sublattice_descent", "g2_3_from_e6e8", "fingerprint",
]

DEFAULT_MASS_CEILING = Fraction(5 * 10 ** 10)

# ---------------- 公共工具 ----------------

def _integral_gram(L: Lattice) -> List[List[int]]:
    if not L.is_integral():
        raise ValueError("需要整格")
    return [[int(x) for x in row] for row in L.gram]


def _lattice_from_rows(L: Lattice, rows: Sequence[Sequence[int]], denom: int, label: str = "") -> Lattice:
    """行向量 rows/denom (原格基坐标) 生成的格, 经 LLL 约化后返回。"""
    B = hermite_basis(rows)
    if len(B) != L.dim:
        raise ValueError("生成元不满秩")
    G = L.gram
    n = L.dim
    gram = [[sum(B[i][a] * G[a][b] * B[j][b] for a in range(n) for b in range(n) if B[i][a] and B[j][b])
             / (denom * denom) for j in range(n)] for i in range(n)]
    raw = Lattice(gram)
    _, Gr = raw.lll()
    return Lattice(Gr, label=label)


def _nullspace_mod_p(F: Sequence[Sequence[int]], n: int, p: int) -> List[List[int]]:
    """{x ∈ F_p^n : F x ≡ 0} 的一组基 (整数代表)。"""
    A = [[x % p for x in row] for row in F if any(x % p for x in row)]
    pivots: List[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i][free]) % p
        basis.append(v)
    return basis


def _kernel_lattice(L: Lattice, functionals: Sequence[Sequence[int]], p: int, label: str = "") -> Lattice:
    """{x ∈ L : f(x) ≡ 0 mod p, f ∈ functionals}。"""
    n = L.dim
    gens = _nullspace_mod_p(functionals, n, p) + [[p if i == j else 0 for j in range(n)] for i in range(n)]
    return _lattice_from_rows(L, gens, 1, label=label)


def fingerprint(L: Lattice) -> Tuple:
    """(det, min, 亲吻数, 前两层 θ 系数): 同构去重的廉价预筛。"""
    def compute():
        m = L.minimum
        layers = short_vectors(L, m + 2)
        prefix = tuple((format_rational(a), 2 * len(v)) for a, v in layers.items())
        return (L.det, m, L.kissing_number, prefix)
    return L._cached('fingerprint', compute)


class _Registry:
    """按指纹分桶、桶内同构判定的类登记表。"""

    def __init__(self) -> None:
        self.classes: List[Lattice] = []
        self._buckets: Dict[Tuple, List[int]] = {}

    def insert(self, L: Lattice) -> Tuple[bool, int]:
        key = fingerprint(L)
        bucket = self._buckets.setdefault(key, [])
        for idx in bucket:
            if is_isometric(self.classes[idx], L):
                return False, idx
        self.classes.append(L)
        bucket.append(len(self.classes) - 1)
        return True, len(self.classes) - 1

# ---------------- Kneser 邻格 ----------------

def _adjust(v: List[int], G: List[List[int]], p: int) -> Optional[List[int]]:
    """把迷向向量 v 调整为 (v,v) ≡ 0 mod 2p^2; (v, L) ⊂ pZ 时返回 None。"""
    n = len(v)
    Gv = [sum(G[i][j] * v[j] for j in range(n)) for i in range(n)]
    u = next((i for i in range(n) if Gv[i] % p), None)
    if u is None:
        return None
    norm = sum(v[i] * Gv[i] for i in range(n))
    modulus = 2 * p * p
    if norm % modulus == 0:
        return v
    if p == 2:
        # (v+2e_u, v+2e_u) = (v,v) + 4(v,e_u) + 4G_uu
        w = list(v)
        w[u] += 2
        return w
    k = norm // (2 * p)
    c = (-k * pow(Gv[u], -1, p)) % p
    w = list(v)
    w[u] += p * c
    return w


def _neighbor(L: Lattice, G: List[List[int]], v: List[int], p: int) -> Optional[Lattice]:
    w = _adjust(v, G, p)
    if w is None:
        return None
    n = L.dim
    Gw = [sum(G[i][j] * w[j] for j in range(n)) for i in range(n)]
    if sum(w[i] * Gw[i] for i in range(n)) % (2 * p * p):
        return None
    # 坐标放大 p 倍: p·L_v 与 w
    base = _nullspace_mod_p([Gw], n, p)
    rows = [[p * x for x in r] for r in base]
    rows += [[p * p if i == j else 0 for j in range(n)] for i in range(n)]
    rows.append(list(w))
    return _lattice_from_rows(L, rows, p, label=f"{L.label}~{p}" if L.label else "")


def _iter_lines(n: int, p: int) -> Iterator[List[int]]:
    """F_p^n 的射影点, 首个非零坐标为 1, 字典序。"""
    for lead in range(n):
        for tail in product(range(p), repeat=n - lead - 1):
            yield [0] * lead + [1] + list(tail)


def _is_isotropic(v: Sequence[int], G: List[List[int]], p: int) -> bool:
    n = len(v)
    norm = sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n) if v[i] and v[j])
    return norm % (4 if p == 2 else p) == 0


def iter_neighbors(L: Lattice, p: int, allow_dividing: bool = False) -> Iterator[Lattice]:
    """按迷向线的字典序逐个产生 p-邻格。"""
    if not L.is_even():
        raise ValueError("Kneser 邻格需要偶格")
    if L.det.numerator % p == 0:
        if not allow_dividing:
            raise ValueError(f"p={p} 整除行列式, 需显式允许并限制到可容许线")
        logger.info("p=%d 整除行列式: 只保留与原格同亏格的邻格", p)
    G = _integral_gram(L)
    ref = jordan_symbol(L, p) if L.det.numerator % p == 0 else None
    for v in _iter_lines(L.dim, p):
        if not _is_isotropic(v, G, p):
            continue
        N = _neighbor(L, G, v, p)
        if N is None:
            continue
        if ref is not None and jordan_symbol(N, p) != ref:
            continue
        yield N


def kneser_neighbors(L: Lattice, p: int, limit: Optional[int] = None, allow_dividing: bool = False) -> List[Lattice]:
    """每条可容许迷向线一个 p-邻格; limit 给定时截断。"""
    out: List[Lattice] = []
    for N in iter_neighbors(L, p, allow_dividing=allow_dividing):
        out.append(N)
        if limit is not None and len(out) >= limit:
            break
    logger.info("p=%d 邻格: %d 个", p, len(out))
    return out


def _random_neighbor(L: Lattice, G: List[List[int]], p: int, rng: np.random.Generator,
                     tries: int = 64) -> Optional[Lattice]:
    for _ in range(tries):
        v = [int(x) for x in rng.integers(0, p, size=L.dim)]
        if not any(v) or not _is_isotropic(v, G, p):
            continue
        N = _neighbor(L, G, v, p)
        if N is not None:
            return N
    return None

# ---------------- 亏格枚举 ----------------

def _default_prime(L: Lattice) -> int:
    d = int(L.det)
    p = 2
    while d % p == 0:
        p = int(sympy.nextprime(p))
    return p


def enumerate_genus(seed: Lattice, p: Optional[int] = None, mass_ceiling: Optional[Fraction] = None,
                    strict: bool = False, budget: int = 20000, per_class: int = 400,
                    rng_seed: int = 0) -> GenusEnumeration:
    """邻格闭包枚举亏格, Σ 1/|Aut| 达到质量时停止。

    射影迷向线总数不超过 per_class 时逐线穷举, 否则轮流对各类随机抽取迷向向量;
    budget 为抽样总数上限。质量超过 mass_ceiling 时拒绝 (strict 时抛 RuntimeError)。
    """
    if not seed.is_even():
        raise ValueError("enumerate_genus 需要偶格")
    g = genus_symbol(seed)
    symbol = g.render()
    target = mass(g)
    ceiling = DEFAULT_MASS_CEILING if mass_ceiling is None else as_fraction(mass_ceiling)
    if target > ceiling:
        note = f"质量 {float(target):.3e} 超过上限 {float(ceiling):.3e}, 不做枚举"
        if strict:
            raise RuntimeError(note)
        logger.warning("亏格 %s: %s", symbol, note)
        return GenusEnumeration(symbol=symbol, mass=target, refused=True, note=note)
    p = p or _default_prime(seed)
    rng = np.random.default_rng(rng_seed)
    reg = _Registry()
    reg.insert(seed)
    auts = [aut_order(seed)]
    found = Fraction(1, auts[0])
    exhaustive = (p ** seed.dim - 1) // (p - 1) <= per_class
    attempts = 0
    cursor = 0
    logger.info("开始枚举亏格 %s (p=%d, 质量 %s)", symbol, p, target)
    while found < target:
        if exhaustive:
            if cursor >= len(reg.classes):
                break
            L = reg.classes[cursor]
            source = iter_neighbors(L, p)
        else:
            if attempts >= budget:
                break
            L = reg.classes[cursor % len(reg.classes)]
            G = _integral_gram(L)
            source = (_random_neighbor(L, G, p, rng) for _ in range(min(per_class, budget - attempts)))
        cursor += 1
        for N in source:
            attempts += 1
            if N is None:
                continue
            new, _ = reg.insert(N)
            if new:
                a = aut_order(N)
                auts.append(a)
                found += Fraction(1, a)
                logger.info("亏格 %s: 第 %d 类, |Aut| = %d", symbol, len(reg.classes), a)
                if found >= target:
                    break
    if found > target:
        raise RuntimeError(f"已找到质量 {found} 超过公式质量 {target}, 同构判定或质量公式有误")
    complete = found == target
    note = ""
    if not complete:
        note = f"p={p} 邻格闭包已穷尽但质量不足, 可换素数重试" if exhaustive else "随机邻格抽样预算耗尽"
        logger.warning("亏格 %s 枚举不完整: %s", symbol, note)
    return GenusEnumeration(symbol=symbol, classes=reg.classes, aut_orders=auts, mass=target,
                            mass_found=found, complete=complete, note=note)


def save_enumeration(result: GenusEnumeration, directory: Union[str, Path]) -> Path:
    """每类一个 Gram 文件, 外加 manifest.json (质量与自同构群阶)。"""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, L in enumerate(result.classes):
        name = f"class_{i:03d}.gram"
        L.save(out / name)
        files.append(name)
    manifest = {
        'symbol': result.symbol,
        'h': len(result.classes),
        'complete': result.complete,
        'mass': format_rational(result.mass) if result.mass is not None else None,
        'mass_found': format_rational(result.mass_found),
        'classes': [{'file': f, 'aut_order': a} for f, a in zip(files, result.aut_orders)],
        'note': result.note,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, ensure_ascii=False, indent=2), encoding='utf-8')
    return out

# ---------------- 极大偶上格 ----------------

def _line_key(a: Tuple[int, ...], orders: Sequence[int], p: int) -> Tuple[int, ...]:
    return min(tuple((k * x) % m for x, m in zip(a, orders)) for k in range(1, p))


def maximal_even_overlattices(L: Lattice) -> List[Lattice]:
    """沿素数阶迷向元逐层爬升到极大偶上格, 每层按同构去重。"""
    if not L.is_even():
        raise ValueError("maximal_even_overlattices 需要偶格")
    maximal = _Registry()
    level: List[Lattice] = [L]
    depth = 0
    while level:
        nxt = _Registry()
        for M in level:
            form = discriminant_form(M)
            climbed = False
            for p in prime_divisors(form.size):
                seen: Set[Tuple[int, ...]] = set()
                for a in isotropic_elements(form, order=p):
                    key = _line_key(a, form.orders, p)
                    if key in seen:
                        continue
                    seen.add(key)
                    climbed = True
                    n = M.dim
                    g = [sum(a[i] * form.generators[i][r] for i in range(len(a))) for r in range(n)]
                    rows = [[p if i == j else 0 for j in range(n)] for i in range(n)]
                    rows.append([int(p * x) for x in g])
                    nxt.insert(_lattice_from_rows(M, rows, p))
            if not climbed:
                maximal.insert(M)
        depth += 1
        level = nxt.classes
        logger.debug("上格爬升第 %d 层: %d 个新格", depth, len(level))
    logger.info("极大偶上格: %d 个", len(maximal.classes))
    return maximal.classes

# ---------------- 子格下降 ----------------

class _QuotientSpace:
    """V = M/(M ∩ pM*) 的坐标化: 按正交分量分块, 每块用 Smith 形取 p 部分坐标。"""

    def __init__(self, M: Lattice, p: int) -> None:
        self.M, self.p = M, p
        self.G = _integral_gram(M)
        n = M.dim
        self.blocks = _orthogonal_blocks(self.G)
        self.reps: List[List[int]] = []       # V 的坐标基在 M 中的代表
        self.proj: List[Tuple[List[int], List[List[int]]]] = []   # (块下标, 该块的 p 部分投影行)
        self.block_dims: List[int] = []
        for idx in self.blocks:
            Gb = [[self.G[i][j] for j in idx] for i in idx]
            diag, _, Vb = smith_form(Gb)
            if any(d % (p * p) == 0 for d in diag):
                raise ValueError(f"pM* ⊄ M (初等因子 {diag}), 不存在指数为 {p} 的子格")
            Vinv = [[int(x) for x in row] for row in inverse(Vb)]
            # 与 p 互素的初等因子在 p 处是单位
            keep = [i for i, d in enumerate(diag) if d % p]
            rows = [Vinv[i] for i in keep]
            self.proj.append((idx, rows))
            self.block_dims.append(len(keep))
            for i in keep:
                v = [0] * n
                for k, gi in enumerate(idx):
                    v[gi] = Vb[k][i]
                self.reps.append(v)
        self.dim = len(self.reps)
        R = np.array(self.reps, dtype=object).reshape(self.dim, n)
        Gm = np.array(self.G, dtype=object)
        self.B = ((R @ Gm @ R.T) % p).astype(np.int64) if self.dim else np.zeros((0, 0), dtype=np.int64)

    def classify(self, x: Sequence[int]) -> Tuple[int, ...]:
        """M 中向量 x 的类坐标。"""
        out: List[int] = []
        for idx, rows in self.proj:
            xb = [x[i] for i in idx]
            out.extend(sum(r[k] * xb[k] for k in range(len(xb))) % self.p for r in rows)
        return tuple(out)

    def block_classify(self, b: int, xb: Sequence[int]) -> Tuple[int, ...]:
        _, rows = self.proj[b]
        return tuple(sum(r[k] * xb[k] for k in range(len(xb))) % self.p for r in rows)

    def functional(self, w: Sequence[int]) -> List[int]:
        """x ↦ b(x, w) mod p 在 M 坐标下的系数。"""
        n = self.M.dim
        rep = [sum(w[k] * self.reps[k][i] for k in range(self.dim)) for i in range(n)]
        return [sum(self.G[i][j] * rep[j] for j in range(n)) % self.p for i in range(n)]


def _orthogonal_blocks(G: List[List[int]]) -> List[List[int]]:
    n = len(G)
    seen = [False] * n
    blocks = []
    for s in range(n):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and G[i][j]:
                    seen[j] = True
                    stack.append(j)
        blocks.append(sorted(comp))
    return blocks


def _coset_minima(space: _QuotientSpace, cap: Fraction) -> np.ndarray:
    """V 全部元素 (混合基 p 进制下标) 的陪集最小范数, 上截断到 cap。"""
    p = space.p
    total = np.zeros(1, dtype=np.float64)
    for b, (idx, _) in enumerate(space.proj):
        k = space.block_dims[b]
        table = np.full(p ** k, float(cap), dtype=np.float64)
        table[0] = 0.0
        if k:
            Gb = [[space.G[i][j] for j in idx] for i in idx]
            sub = Lattice(Gb)
            for a, vecs in short_vectors(sub, cap).items():
                if a >= cap:
                    continue
                for v in vecs:
                    for sgn in (1, -1):
                        c = space.block_classify(b, [sgn * x for x in v])
                        pos = _index(c, p)
                        table[pos] = min(table[pos], float(a))
        total = (total[:, None] + table[None, :]).reshape(-1)
    return np.minimum(total, float(cap))


def _index(c: Sequence[int], p: int) -> int:
    out = 0
    for x in c:
        out = out * p + x
    return out


def _coords(idx: int, dim: int, p: int) -> Tuple[int, ...]:
    out = [0] * dim
    for k in range(dim - 1, -1, -1):
        out[k] = idx % p
        idx //= p
    return tuple(out)


def _span_points(basis: Sequence[Tuple[int, ...]], p: int) -> Iterator[Tuple[int, ...]]:
    """子空间的全部非零元。"""
    dim = len(basis[0])
    for coeffs in product(range(p), repeat=len(basis)):
        if any(coeffs):
            yield tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(dim))


def _rref_key(basis: Sequence[Tuple[int, ...]], p: int) -> Tuple[Tuple[int, ...], ...]:
    A = [list(b) for b in basis]
    dim = len(A[0])
    r = 0
    for c in range(dim):
        piv = next((i for i in range(r, len(A)) if A[i][c] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        r += 1
    return tuple(tuple(row) for row in A[:r])




def _good_points(space: _QuotientSpace, cap: Fraction) -> Tuple[List[Tuple[int, ...]], Set[Tuple[int, ...]], np.ndarray]:
    """陪集最小范数 ≥ cap 的迷向类: (射影代表, 全部好类, 代表间的正交表)。"""
    p = space.p
    minima = _coset_minima(space, cap)
    B = space.B
    points: List[Tuple[int, ...]] = []
    good: Set[Tuple[int, ...]] = set()
    for idx in np.nonzero(minima >= float(cap))[0].tolist():
        c = _coords(idx, space.dim, p)
        v = np.array(c, dtype=np.int64)
        if int(v @ B @ v) % p:
            continue
        good.add(c)
        if c[next(i for i, x in enumerate(c) if x)] == 1:
            points.append(c)
    points.sort()
    logger.info("p=%d: 好的迷向射影点 %d 个", p, len(points))
    P = np.array(points, dtype=np.int64).reshape(len(points), space.dim)
    orth = (P @ B @ P.T) % p == 0 if len(points) else np.zeros((0, 0), dtype=bool)
    return points, good, orth


def _walk(space: _QuotientSpace, points: List[Tuple[int, ...]], good: Set[Tuple[int, ...]], orth: np.ndarray,
          wanted: Set[int], budget: Optional[int], result: DescentResult
          ) -> Iterator[Tuple[int, List[int], List[Tuple[int, ...]]]]:
    """逐层扩张全迷向子空间 W (每个非零元都是好类), 产出 wanted 层的 (层, 点下标, 基)。

    每层按 RREF 去重; 节点数计入 result.nodes_visited, 超出 budget 时置 budget_exhausted。
    """
    p = space.p
    top = max(wanted, default=0)
    frontier: List[Tuple[List[int], np.ndarray]] = [([], np.arange(len(points)))]
    for depth in range(1, top + 1):
        nxt: List[Tuple[List[int], np.ndarray]] = []
        keys: Set[Tuple] = set()
        for chosen, cands in frontier:
            basis = [points[i] for i in chosen]
            for j in cands.tolist():
                if budget is not None and result.nodes_visited >= budget:
                    result.budget_exhausted = True
                    break
                new_basis = basis + [points[j]]
                if chosen and not all(pt in good for pt in _span_points(new_basis, p)):
                    continue
                key = _rref_key(new_basis, p)
                if len(key) < depth or key in keys:
                    continue
                keys.add(key)
                result.nodes_visited += 1
                members = chosen + [j]
                rest = cands[(cands > j)]
                rest = rest[orth[j, rest]] if len(rest) else rest
                if depth in wanted:
                    yield depth, members, new_basis
                if depth < top:
                    nxt.append((members, rest))
            if result.budget_exhausted:
                break
        result.levels.append(len(keys))
        logger.debug("p=%d 下降第 %d 层: %d 个子空间", p, depth, len(keys))
        frontier = nxt
        if result.budget_exhausted or not frontier:
            break


def _depth_cap(M: Lattice, p: int, dim: int, hi: Optional[Fraction]) -> int:
    top = dim // 2
    if hi is not None:
        while top >= 1 and M.det * p ** (2 * top) > hi:
            top -= 1
    return top


def sublattice_descent(M: Lattice, p: int, dual_min_bound, target_min, exponent_bound: int,
                       budget: Optional[int] = 200000, gamma_bound: Optional[Fraction] = None,
                       dims: Optional[Sequence[int]] = None, first_only: bool = False) -> DescentResult:
    """M 的子格 L, 满足 E·L* ⊂ L (E = exponent_bound), min(L*) ≥ dual_min_bound, min(L) = target_min。

    E = p 时逐层 (每层指数乘 p) 扩张 V = M/(M ∩ pM*) 中的全迷向子空间 W, L = W^⊥ 的原像;
    W 中出现陪集最小范数 < p^2·dual_min_bound 的类即剪枝。E 为多个素数之积时
    见 _mixed_descent。幸存格按同构去重。
    """
    primes = prime_divisors(exponent_bound) if exponent_bound > 1 else []
    if p not in primes or any(exponent_bound % (q * q) == 0 for q in primes):
        raise ValueError(f"指数界 {exponent_bound} 须为含素数 {p} 的无平方因子数")
    if not M.is_even():
        raise ValueError("sublattice_descent 需要偶格")
    bound, tmin = as_fraction(dual_min_bound), as_fraction(target_min)
    if bound <= 0 or tmin <= 0:
        raise ValueError("界必须为正")
    result = DescentResult()
    if M.dual().minimum < bound:
        logger.info("min(M*) < %s, 根节点即被剪枝", format_rational(bound))
        return result
    gamma = gamma_bound if gamma_bound is not None else (GAMMA14_BOUND if M.dim == 14 else None)
    lo, hi = det_bounds(M.dim, tmin, bound, gamma) if gamma is not None else (None, None)
    if len(primes) > 1:
        return _mixed_descent(M, primes, bound, tmin, budget, lo, hi, result)

    space = _QuotientSpace(M, p)
    cap = p * p * bound
    k_lo, k_hi = 1, _depth_cap(M, p, space.dim, hi)
    if lo is not None:
        while k_lo <= k_hi and M.det * p ** (2 * k_lo) < lo:
            k_lo += 1
    wanted = set(dims) if dims is not None else set(range(k_lo, k_hi + 1))
    logger.info("子格下降: dim V=%d, 层数 %s, 陪集界 %s", space.dim, sorted(wanted), format_rational(cap))
    points, good, orth = _good_points(space, cap)

    # 需要被 W 排除的短向量 (范数 < target_min)
    shorts = []
    for a, vecs in short_vectors(M, tmin).items():
        if a < tmin:
            shorts.extend(space.classify(v) for v in vecs)
    S = np.array(shorts, dtype=np.int64).reshape(len(shorts), space.dim)
    P = np.array(points, dtype=np.int64).reshape(len(points), space.dim)
    hits = (S @ space.B @ P.T) % p != 0 if len(points) and len(shorts) else np.ones((len(shorts), len(points)), dtype=bool)

    survivors = _Registry()
    for depth, members, basis in _walk(space, points, good, orth, wanted, budget, result):
        if len(shorts) and not hits[:, members].any(axis=1).all():
            continue
        L = _descend_to(space, basis, depth)
        if L.minimum == tmin and L.dual().minimum >= bound:
            is_new, _ = survivors.insert(L)
            if is_new:
                logger.info("下降幸存格: det=%s, 层 %d", format_rational(L.det), depth)
                if first_only:
                    break
    result.survivors = survivors.classes
    if result.budget_exhausted:
        logger.warning("子格下降预算 %s 耗尽, 结果不完整", budget)
    return result


def _mixed_descent(M: Lattice, primes: Sequence[int], bound: Fraction, tmin: Fraction, budget: Optional[int],
                   lo: Optional[Fraction], hi: Optional[Fraction], result: DescentResult) -> DescentResult:
    """E = ∏ primes: 各素数处分别下降 (共用陪集剪枝), 再取 L = Σ (E/p)·L_p。

    L_p 与 L 在 p 处一致、在其余素数处等于 M, 故 L_p* ⊂ L* 且每个 L_p 都通过剪枝;
    组合后要求 √E·L* 为偶格。
    """
    E = prod(primes)
    nodes: Dict[int, List[List[List[int]]]] = {}
    for p in primes:
        space = _QuotientSpace(M, p)
        top = _depth_cap(M, p, space.dim, hi)
        points, good, orth = _good_points(space, p * p * bound)
        funcs: List[List[List[int]]] = [[]]
        for _, _, basis in _walk(space, points, good, orth, set(range(1, top + 1)), budget, result):
            funcs.append([space.functional(w) for w in basis])
        nodes[p] = funcs
        logger.info("p=%d 处下降节点 %d 个", p, len(funcs))
    survivors = _Registry()
    for combo in product(*(nodes[p] for p in primes)):
        L = _mixed_kernel_lattice(M, dict(zip(primes, combo)), E)
        if (hi is not None and L.det > hi) or (lo is not None and L.det < lo):
            continue
        if L.minimum != tmin or L.dual().minimum < bound or not rescale(L.dual(), E).is_even():
            continue
        if survivors.insert(L)[0]:
            logger.info("指数 %d 下降幸存格: det=%s", E, format_rational(L.det))
    result.survivors = survivors.classes
    if result.budget_exhausted:
        logger.warning("子格下降预算 %s 耗尽, 结果不完整", budget)
    return result


def _mixed_kernel_lattice(M: Lattice, parts: Dict[int, List[List[int]]], E: int) -> Lattice:
    """∩_p {x ∈ M : f(x) ≡ 0 mod p} = Σ_p (E/p)·L_p。"""
    n = M.dim
    rows: List[List[int]] = []
    for p, funcs in parts.items():
        c = E // p
        gens = _nullspace_mod_p(funcs, n, p) + [[p if i == j else 0 for j in range(n)] for i in range(n)]
        rows.extend([c * x for x in g] for g in gens)
    label = f"{M.label}/E{E}" if M.label else ""
    return _lattice_from_rows(M, rows, 1, label=label)


def _descend_to(space: _QuotientSpace, basis: Sequence[Tuple[int, ...]], depth: int) -> Lattice:
    funcs = [space.functional(w) for w in basis]
    return _kernel_lattice(space.M, funcs, space.p, label=f"{space.M.label}/W{depth}" if space.M.label else "")



def g2_3_from_e6e8(budget: Optional[int] = 500000) -> Lattice:
    """在 E6⊥E8 中寻找 3 维全迷向子空间, 构造 [±G2(3)]_14 并复核不变量。"""
    from .catalog import catalog
    M = catalog('E6+E8', validate=False)
    res = sublattice_descent(M, 3, G2_3_DUAL_MIN, G2_3_MIN, 3, budget=budget, dims=[3], first_only=True)
    if not res.survivors:
        raise RuntimeError("未在 E6⊥E8 中找到满足条件的子格" + (" (预算耗尽)" if res.budget_exhausted else ""))
    L = res.survivors[0]
    if L.det != G2_3_DET or L.minimum != G2_3_MIN or L.kissing_number != G2_3_KISSING:
        raise RuntimeError(f"构造的格不变量不符: det={L.det}, min={L.minimum}, kissing={L.kissing_number}")
    return L
