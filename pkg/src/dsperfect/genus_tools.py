"""亏格符号: p-进 Jordan 分解、规范形、质量公式、奇性公式 (Milgram) 与判别型

符号约定:
    - 局部符号由 Jordan 分量 (scale = p 的幂次, dim, sign = ε) 组成;
      p = 2 时另记奇偶型 (odd) 与迹 (oddity, mod 8)。
    - 渲染时省略幺模分量, 例如 A5 → '2^{-1}_3 3^1', D14 → '2^2_6'。
    - 2-进规范形: 先在每个 compartment 内做迹融合, 再沿每个 train 把符号
      推到首位分量; 每推动一步, 相关 compartment 的迹加 4。
"""
from __future__ import annotations
from fractions import Fraction
from functools import reduce
from itertools import product
from math import comb, gcd, lcm
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple
import re

import numpy as np
import sympy

from .lattice_core import Lattice
from .linalg import Matrix, smith_form
from .models import DiscriminantForm, GenusSymbol, JordanConstituent, LocalSymbol, MilgramResult
from .utils import fundamental_discriminant, kronecker, logger, prime_divisors, valuation

__all__ = [
    "jordan_symbol", "genus_symbol", "canonical_local", "canonical_symbol", "genus_key", "same_genus",
    "parse_genus_symbol", "p_excess", "two_oddity", "milgram_check", "mass",
    "symbol_level", "is_maximal_symbol", "local_symbols", "list_genus_symbols",
    "discriminant_form", "symbol_discriminant_form", "gauss_sum_signature", "is_anisotropic",
    "isotropic_elements",
]

GAUSS_SUM_CAP = 2_000_000
# 2 部分超过此阶时按有迷向元处理
ANISOTROPY_CAP = 2 ** 16

# ---------------- p-进单位 ----------------

def _unit_mod(u: Fraction, m: int) -> int:
    """p-进单位 u = a/b 模 m 的剩余 (b 与 m 互素)。"""
    return (u.numerator * pow(u.denominator, -1, m)) % m


def _unit_sign(u: Fraction, p: int) -> int:
    if p == 2:
        return 1 if _unit_mod(u, 8) in (1, 7) else -1
    return int(sympy.legendre_symbol(_unit_mod(u, p), p))


def _det_unit_sign(D: int, p: int) -> int:
    """行列式 D 去掉 p 部分后的 ε。"""
    u = Fraction(D, p ** valuation(D, p))
    return _unit_sign(u, p)

# ---------------- Jordan 分解 ----------------

def _min_valuation(A: Matrix, p: int) -> int:
    return min(valuation(A[i][j], p) for i in range(len(A)) for j in range(i, len(A)) if A[i][j] != 0)


def _eliminate(A: Matrix, piv: Sequence[int]) -> Matrix:
    """对主块 piv 做 Schur 补。"""
    rest = [k for k in range(len(A)) if k not in piv]
    if len(piv) == 1:
        i = piv[0]
        d = A[i][i]
        return [[A[r][c] - A[r][i] * A[i][c] / d for c in rest] for r in rest]
    i, j = piv
    a, b, c = A[i][i], A[i][j], A[j][j]
    det = a * c - b * b
    inv = ((c / det, -b / det), (-b / det, a / det))
    return [
        [A[r][s] - sum(A[r][x] * inv[xi][yi] * A[y][s] for xi, x in enumerate(piv) for yi, y in enumerate(piv))
         for s in rest]
        for r in rest
    ]


def _raw_blocks(G: Matrix, p: int) -> List[Tuple[int, str, Fraction]]:
    """逐块分裂: 返回 (幂次, 'diag'|'block', 单位) 序列; 'block' 的单位为 det/p^{2v}。"""
    A = [row[:] for row in G]
    out: List[Tuple[int, str, Fraction]] = []
    while A:
        m = len(A)
        v = _min_valuation(A, p)
        diag = next((i for i in range(m) if A[i][i] != 0 and valuation(A[i][i], p) == v), None)
        pair = None
        if diag is None:
            pair = next((i, j) for i in range(m) for j in range(i + 1, m)
                        if A[i][j] != 0 and valuation(A[i][j], p) == v)
            if p != 2:
                i, j = pair
                # e_i ← e_i + e_j, 新对角元赋值为 v
                for k in range(m):
                    A[i][k] += A[j][k]
                for k in range(m):
                    A[k][i] += A[k][j]
                diag, pair = i, None
        if diag is not None:
            out.append((v, 'diag', A[diag][diag] / Fraction(p) ** v))
            A = _eliminate(A, [diag])
        else:
            i, j = pair
            det = A[i][i] * A[j][j] - A[i][j] ** 2
            out.append((v, 'block', det / Fraction(p) ** (2 * v)))
            A = _eliminate(A, [i, j])
    return out


def jordan_symbol(L: Lattice, p: int, canonical: bool = True) -> LocalSymbol:
    """整格 L 在 p 处的 Jordan 符号; p = 2 时默认返回规范形。"""
    if not sympy.isprime(p):
        raise ValueError(f"{p} 不是素数")
    if not L.is_integral():
        raise ValueError("jordan_symbol 需要整格")
    blocks = _raw_blocks(L.gram, p)
    by_scale: Dict[int, Dict[str, object]] = {}
    for v, kind, u in blocks:
        slot = by_scale.setdefault(v, {'dim': 0, 'unit': Fraction(1), 'odd': False, 'trace': 0})
        slot['dim'] += 1 if kind == 'diag' else 2
        slot['unit'] *= u
        if kind == 'diag':
            slot['odd'] = True
            if p == 2:
                slot['trace'] += _unit_mod(u, 8)
    cons = []
    for v in sorted(by_scale):
        slot = by_scale[v]
        odd = bool(slot['odd']) and p == 2
        cons.append(JordanConstituent(
            scale=v, dim=slot['dim'], sign=_unit_sign(slot['unit'], p),
            odd=odd, oddity=(slot['trace'] % 8) if odd else 0,
        ))
    sym = LocalSymbol(p=p, constituents=cons)
    return canonical_local(sym) if canonical else sym


def genus_symbol(L: Lattice) -> GenusSymbol:
    """所有 p | 2·det 处的规范局部符号。"""
    d = L.det
    if d.denominator != 1 or not L.is_integral():
        raise ValueError("genus_symbol 需要整格")
    primes = sorted(set([2] + prime_divisors(int(d))))
    return GenusSymbol(n=L.dim, locals=[jordan_symbol(L, p) for p in primes])

# ---------------- 规范形 ----------------

def _merged(ls: LocalSymbol) -> List[JordanConstituent]:
    by_scale: Dict[int, JordanConstituent] = {}
    for c in ls.constituents:
        if c.dim == 0:
            continue
        cur = by_scale.get(c.scale)
        if cur is None:
            by_scale[c.scale] = c.model_copy()
        else:
            cur.dim += c.dim
            cur.sign *= c.sign
            cur.odd = cur.odd or c.odd
            cur.oddity = (cur.oddity + c.oddity) % 8
    return [by_scale[s] for s in sorted(by_scale)]


def _compartments(cs: Sequence[JordanConstituent]) -> List[List[int]]:
    comps: List[List[int]] = []
    for i, c in enumerate(cs):
        if not c.odd:
            continue
        if comps and comps[-1][-1] == i - 1 and cs[i - 1].scale == c.scale - 1:
            comps[-1].append(i)
        else:
            comps.append([i])
    return comps


def _trains(cs: Sequence[JordanConstituent]) -> List[List[int]]:
    if not cs:
        return []
    trains = [[0]]
    for i in range(1, len(cs)):
        prev, cur = cs[i - 1], cs[i]
        gap = cur.scale - prev.scale
        if gap > 2 or (gap == 2 and not (prev.odd and cur.odd)) or (not prev.odd and not cur.odd):
            trains.append([i])
        else:
            trains[-1].append(i)
    return trains


def canonical_local(ls: LocalSymbol) -> LocalSymbol:
    """合并同幂次分量; p = 2 时再做迹融合与符号推移。"""
    cs = _merged(ls)
    if ls.p != 2:
        for c in cs:
            c.odd, c.oddity = False, 0
        return LocalSymbol(p=ls.p, constituents=cs)
    for c in cs:
        c.oddity = c.oddity % 8 if c.odd else 0
    comps = _compartments(cs)
    for comp in comps:
        total = sum(cs[i].oddity for i in comp) % 8
        for i in comp:
            cs[i].oddity = 0
        cs[comp[0]].oddity = total
    for train in _trains(cs):
        for k in range(len(train) - 1, 0, -1):
            j, prev = train[k], train[k - 1]
            if cs[j].sign == -1:
                cs[j].sign = 1
                cs[prev].sign *= -1
                for comp in comps:
                    if j in comp or prev in comp:
                        cs[comp[0]].oddity = (cs[comp[0]].oddity + 4) % 8
    return LocalSymbol(p=2, constituents=cs)


def canonical_symbol(g: GenusSymbol) -> GenusSymbol:
    return GenusSymbol(n=g.n, locals=[canonical_local(ls) for ls in sorted(g.locals, key=lambda s: s.p)])


def genus_key(g: GenusSymbol) -> Tuple:
    g = canonical_symbol(g)
    return (g.n, tuple(
        (ls.p, tuple((c.scale, c.dim, c.sign, c.odd, c.oddity) for c in ls.constituents))
        for ls in g.locals
    ))


def same_genus(g1: GenusSymbol, g2: GenusSymbol) -> bool:
    return genus_key(g1) == genus_key(g2)

# ---------------- 解析 ----------------

_TOKEN_RE = re.compile(r"^(\d+)\^\{?([+-]?\d+)\}?(?:_\{?(\d+|II)\}?)?$")


def parse_genus_symbol(text: str, n: int, even: bool = True) -> GenusSymbol:
    """解析渲染形式 (如 '2^{-2} 3^{-1}', '3^-1 5^1'), 补出幺模分量。

    2-进分量带下标视为奇型 (即使下标为 0), 不做规范化; 唯一的例外是下标 0 而作为
    奇型不可实现的分量 (如 2^{-2}_0), 按偶型 II 读取。
    """
    by_p: Dict[int, List[JordanConstituent]] = {}
    for tok in text.split():
        m = _TOKEN_RE.match(tok)
        if not m:
            raise ValueError(f"无法解析亏格符号分量: {tok!r}")
        q, e, sub = int(m.group(1)), int(m.group(2)), m.group(3)
        fac = sympy.factorint(q)
        if len(fac) != 1:
            raise ValueError(f"{q} 不是素数幂")
        (p, s), = fac.items()
        if e == 0:
            raise ValueError(f"分量维数为 0: {tok!r}")
        odd = sub is not None and sub != 'II'
        if odd and p != 2:
            raise ValueError(f"奇素数分量不带迹: {tok!r}")
        c = JordanConstituent(scale=s, dim=abs(e), sign=-1 if e < 0 else 1, odd=odd,
                              oddity=int(sub) % 8 if odd else 0)
        if odd and c.oddity == 0 and c.dim % 2 == 0 and not _constituent_realizable(c):
            c.odd = False
        by_p.setdefault(p, []).append(c)
    D = 1
    for p, cs in by_p.items():
        for c in cs:
            D *= p ** (c.scale * c.dim)
    locals_: List[LocalSymbol] = []
    odd_excess = 0
    for p in sorted(set([2] + list(by_p))):
        cs = sorted(by_p.get(p, []), key=lambda c: c.scale)
        n0 = n - sum(c.dim for c in cs)
        if n0 < 0:
            raise ValueError(f"p={p} 处分量维数之和超过 {n}")
        sign = _det_unit_sign(D, p)
        for c in cs:
            sign *= c.sign
        if n0 == 0:
            if sign != 1:
                raise ValueError(f"p={p} 处符号与行列式 {D} 不相容")
        else:
            if p == 2 and even and n0 % 2:
                raise ValueError(f"偶格的 2-进幺模分量维数 {n0} 必须为偶数")
            cs = [JordanConstituent(scale=0, dim=n0, sign=sign)] + cs
        ls = LocalSymbol(p=p, constituents=cs)
        if p != 2:
            odd_excess += p_excess(ls)
        locals_.append(ls)
    if not even:
        two = locals_[0]
        unimod = next((c for c in two.constituents if c.scale == 0), None)
        if unimod is not None:
            # 由奇性公式反解幺模分量的迹
            unimod.odd = True
            unimod.oddity = 0
            unimod.oddity = (n + odd_excess - two_oddity(two)) % 8
    return GenusSymbol(n=n, locals=locals_)

# ---------------- 奇性公式 ----------------

def p_excess(ls: LocalSymbol) -> int:
    """p-excess = Σ n_q(q − 1) + 4k_q (mod 8), q 为分量的 scale p^s。"""
    tot = 0
    for c in ls.constituents:
        tot += c.dim * (ls.p ** c.scale - 1)
        if c.scale % 2 == 1 and c.sign == -1:
            tot += 4
    return tot % 8


def two_oddity(ls: LocalSymbol) -> int:
    tot = 0
    for c in ls.constituents:
        if c.odd:
            tot += c.oddity
        if c.scale % 2 == 1 and c.sign == -1:
            tot += 4
    return tot % 8


def milgram_check(g: GenusSymbol) -> MilgramResult:
    """正定情形: n + Σ_{p≥3} p-excess ≡ 2-oddity (mod 8)。"""
    detail: Dict[str, int] = {}
    excess = 0
    oddity = 0
    for ls in g.locals:
        if ls.p == 2:
            oddity = two_oddity(ls)
            detail['2'] = oddity
        else:
            e = p_excess(ls)
            detail[str(ls.p)] = e
            excess += e
    total = (g.n + excess) % 8
    return MilgramResult(ok=total == oddity, signature=g.n % 8, oddity_total=total, detail=detail)

# ---------------- 存在性、级与极大性 ----------------

def _constituent_realizable(c: JordanConstituent) -> bool:
    if c.dim == 0:
        return True
    if not c.odd:
        return c.dim % 2 == 0
    t = c.oddity % 8
    if t % 2 != c.dim % 2:
        return False
    if c.dim == 1:
        return t in ((1, 7) if c.sign == 1 else (3, 5))
    if c.dim == 2:
        return not ((c.sign == 1 and t == 4) or (c.sign == -1 and t == 0))
    return True


def _odd_units(dim: int, sign: int, t: int) -> Optional[List[int]]:
    head = [1] * max(dim - 3, 0)
    for tail in product((1, 3, 5, 7), repeat=dim - len(head)):
        u = head + list(tail)
        prod_ = reduce(lambda a, b: a * b % 8, u, 1)
        if sum(u) % 8 == t % 8 and (1 if prod_ in (1, 7) else -1) == sign:
            return u
    return None


def symbol_level(g: GenusSymbol) -> int:
    """偶格的级 N: √N·L* 为偶格的最小 N。"""
    N = 1
    for ls in g.locals:
        e = 0
        for c in ls.constituents:
            if c.dim == 0:
                continue
            e = max(e, c.scale + (1 if ls.p == 2 and c.odd else 0))
        N *= ls.p ** e
    return N


def _odd_anisotropic(ls: LocalSymbol) -> bool:
    p = ls.p
    for c in _merged(ls):
        if c.scale == 0:
            continue
        if c.scale >= 2 or c.dim >= 3:
            return False
        if c.dim == 2 and c.sign == int(sympy.legendre_symbol(p - 1, p)):
            return False
    return True


def is_maximal_symbol(g: GenusSymbol) -> bool:
    """偶格亏格极大 ⇔ 判别型各 p 部分均无迷向元。"""
    if not g.is_even():
        return False
    for ls in g.locals:
        if ls.p != 2:
            if not _odd_anisotropic(ls):
                return False
        else:
            form = _two_part_form(ls)
            if form is None or form.size > ANISOTROPY_CAP:
                return False
            if form.size > 1 and not is_anisotropic(form):
                return False
    return True

# ---------------- 判别型 ----------------

def discriminant_form(L: Lattice) -> DiscriminantForm:
    """L*/L 的生成元 (Smith 形) 与 q/b 值矩阵。"""
    if not L.is_integral():
        raise ValueError("判别型需要整格")
    d, Gi = L.int_gram()
    diag, _, V = smith_form(Gi)
    n = L.dim
    gens: List[Tuple[Fraction, ...]] = []
    orders: List[int] = []
    for i, di in enumerate(diag):
        if abs(di) > 1:
            gens.append(tuple(Fraction(V[r][i], abs(di)) for r in range(n)))
            orders.append(abs(di))
    even = L.is_even()
    G = L.gram
    k = len(gens)
    M = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        Gx = [sum(G[r][c] * gens[i][c] for c in range(n)) for r in range(n)]
        for j in range(i, k):
            v = sum(gens[j][r] * Gx[r] for r in range(n))
            mod = (2 if even else 1) if i == j else 1
            v -= mod * (v // mod)
            M[i][j] = M[j][i] = v
    return DiscriminantForm(orders=orders, generators=gens, gram=M, even=even)


def _two_part_entries(ls: LocalSymbol) -> Optional[List[Tuple[int, List[List[Fraction]]]]]:
    """由 2-进符号构造判别型 2 部分的块; 奇分量不可实现时返回 None。"""
    entries: List[Tuple[int, List[List[Fraction]]]] = []
    for c in _merged(ls):
        if c.scale == 0:
            continue
        q = 2 ** c.scale
        modulus = 2 ** (c.scale + 3)
        if c.odd:
            units = _odd_units(c.dim, c.sign, c.oddity)
            if units is None:
                return None
            for u in units:
                entries.append((q, [[Fraction(pow(u, -1, modulus), q)]]))
        else:
            k = c.dim // 2
            inv3 = pow(3, -1, modulus)
            for idx in range(k):
                if c.sign == -1 and idx == 0:
                    entries.append((q, [[Fraction(2 * inv3, q), Fraction(-inv3, q)],
                                        [Fraction(-inv3, q), Fraction(2 * inv3, q)]]))
                else:
                    entries.append((q, [[Fraction(0), Fraction(1, q)], [Fraction(1, q), Fraction(0)]]))
    return entries


def _two_part_form(ls: LocalSymbol) -> Optional[DiscriminantForm]:
    entries = _two_part_entries(ls)
    return None if entries is None else _block_form(entries)


def _block_form(entries: Sequence[Tuple[int, List[List[Fraction]]]]) -> DiscriminantForm:
    orders = [q for q, blk in entries for _ in blk]
    k = len(orders)
    M = [[Fraction(0)] * k for _ in range(k)]
    off = 0
    for _, blk in entries:
        for i in range(len(blk)):
            for j in range(len(blk)):
                v = blk[i][j]
                mod = 2 if i == j else 1
                M[off + i][off + j] = v - mod * (v // mod)
        off += len(blk)
    return DiscriminantForm(orders=orders, gram=M, even=True)


def symbol_discriminant_form(g: GenusSymbol) -> DiscriminantForm:
    """由亏格符号构造判别型的一个代表 (各 p 部分正交和)。"""
    entries: List[Tuple[int, List[List[Fraction]]]] = []
    for ls in sorted(g.locals, key=lambda s: s.p):
        if ls.p == 2:
            two = _two_part_entries(ls)
            if two is None:
                raise ValueError("2-进分量不可实现")
            entries.extend(two)
            continue
        p = ls.p
        nonres = next(a for a in range(2, p) if sympy.legendre_symbol(a, p) == -1)
        for c in _merged(ls):
            if c.scale == 0:
                continue
            q = p ** c.scale
            units = [1] * (c.dim - 1) + [1 if c.sign == 1 else nonres]
            for u in units:
                cnum = pow(u, -1, q)
                if cnum % 2:
                    cnum += q
                entries.append((q, [[Fraction(cnum, q)]]))
    return _block_form(entries)


def _element_grid(orders: Sequence[int]) -> np.ndarray:
    axes = [np.arange(m, dtype=np.int64) for m in orders]
    mesh = np.meshgrid(*axes, indexing='ij')
    return np.stack([x.reshape(-1) for x in mesh], axis=1)


def _scaled_values(form: DiscriminantForm) -> Tuple[np.ndarray, int, np.ndarray]:
    """全部元素的 q 值乘以公分母 N 后的整数 (mod 2N 或 mod N)。"""
    if form.size > GAUSS_SUM_CAP:
        raise ValueError(f"判别群阶 {form.size} 超过上限 {GAUSS_SUM_CAP}")
    k = len(form.orders)
    N = 1
    for row in form.gram:
        for v in row:
            N = lcm(N, v.denominator)
    A = _element_grid(form.orders)
    tot = np.zeros(A.shape[0], dtype=np.int64)
    mod = 2 * N if form.even else N
    for i in range(k):
        qi = int(form.gram[i][i] * N) % mod
        tot = (tot + (A[:, i] * A[:, i] % mod) * qi) % mod
        for j in range(i + 1, k):
            bij = int(2 * form.gram[i][j] * N) % mod
            if bij:
                tot = (tot + (A[:, i] * A[:, j] % mod) * bij) % mod
    return tot, mod, A


def gauss_sum_signature(form: DiscriminantForm) -> int:
    """Σ_x exp(πi·q(x)) = √|A|·exp(2πi·σ/8), 返回 σ mod 8。"""
    if not form.even:
        raise ValueError("Gauss 和仅对偶格判别型定义")
    if form.size == 1:
        return 0
    vals, mod, _ = _scaled_values(form)
    S = np.exp(2j * np.pi * vals.astype(float) / mod).sum()
    if abs(abs(S) - np.sqrt(form.size)) > 1e-6 * np.sqrt(form.size):
        raise ValueError("Gauss 和模长不等于 √|A|, 值矩阵不是非退化二次型")
    return int(round(np.angle(S) / (np.pi / 4))) % 8


def isotropic_elements(form: DiscriminantForm, order: Optional[int] = None) -> List[Tuple[int, ...]]:
    """q(x) ≡ 0 的非零元; order 给定时只保留该阶的元。"""
    if form.size == 1:
        return []
    vals, _, A = _scaled_values(form)
    hits = np.nonzero(vals == 0)[0]
    out: List[Tuple[int, ...]] = []
    for h in hits.tolist():
        a = tuple(int(x) for x in A[h])
        if not any(a):
            continue
        if order is not None:
            o = 1
            for ai, m in zip(a, form.orders):
                o = lcm(o, m // gcd(ai, m))
            if o != order:
                continue
        out.append(a)
    return out


def is_anisotropic(form: DiscriminantForm) -> bool:
    return not isotropic_elements(form)

# ---------------- 局部符号枚举 ----------------

def _dim_splits(v: int, n: int, max_scale: int) -> Iterator[Dict[int, int]]:
    """Σ s·n_s = v, Σ n_s ≤ n, 1 ≤ s ≤ max_scale 的全部 {s: n_s}。"""
    def rec(s: int, left: int, room: int, cur: Dict[int, int]) -> Iterator[Dict[int, int]]:
        if left == 0:
            yield dict(cur)
            return
        if s > max_scale:
            return
        for k in range(0, min(room, left // s) + 1):
            if k:
                cur[s] = k
            yield from rec(s + 1, left - s * k, room - k, cur)
            cur.pop(s, None)
    yield from rec(1, v, n, {})


def _two_options(s: int, dim: int, allow_odd: bool, allow_even: bool) -> List[JordanConstituent]:
    out: List[JordanConstituent] = []
    if allow_even and dim % 2 == 0:
        for sign in (1, -1):
            out.append(JordanConstituent(scale=s, dim=dim, sign=sign))
    if allow_odd:
        for sign in (1, -1):
            for t in range(8):
                c = JordanConstituent(scale=s, dim=dim, sign=sign, odd=True, oddity=t)
                if _constituent_realizable(c):
                    out.append(c)
    return out


def local_symbols(p: int, n: int, D: int, even: bool = True, max_scale: Optional[int] = None,
                  level_exponent: Optional[int] = None) -> List[LocalSymbol]:
    """维数 n、行列式 D 的全部 p-进符号 (规范形, 去重)。"""
    v = valuation(D, p) if D % p == 0 else 0
    top = v if max_scale is None else min(v, max_scale)
    det_sign = _det_unit_sign(D, p)
    seen: Dict[Tuple, LocalSymbol] = {}
    for split in _dim_splits(v, n, max(top, 0)):
        n0 = n - sum(split.values())
        scales = sorted(split)
        if p != 2:
            for signs in product((1, -1), repeat=len(scales)):
                cs = [JordanConstituent(scale=s, dim=split[s], sign=e) for s, e in zip(scales, signs)]
                s0 = det_sign
                for e in signs:
                    s0 *= e
                if n0 == 0:
                    if s0 != 1:
                        continue
                else:
                    cs = [JordanConstituent(scale=0, dim=n0, sign=s0)] + cs
                ls = canonical_local(LocalSymbol(p=p, constituents=cs))
                seen.setdefault(_local_key(ls), ls)
            continue
        choices = []
        for s in scales:
            opts = _two_options(s, split[s], allow_odd=True, allow_even=True)
            if level_exponent is not None:
                opts = [c for c in opts if c.scale + (1 if c.odd else 0) <= level_exponent]
            choices.append(opts)
        uni_opts: List[Optional[JordanConstituent]]
        for combo in product(*choices):
            s0 = det_sign
            for c in combo:
                s0 *= c.sign
            if n0 == 0:
                if s0 != 1:
                    continue
                uni_opts = [None]
            elif even:
                if n0 % 2:
                    continue
                uni_opts = [JordanConstituent(scale=0, dim=n0, sign=s0)]
            else:
                uni_opts = [c for c in _two_options(0, n0, allow_odd=True, allow_even=False) if c.sign == s0]
            for uni in uni_opts:
                cs = ([uni] if uni is not None else []) + [c.model_copy() for c in combo]
                ls = canonical_local(LocalSymbol(p=2, constituents=cs))
                seen.setdefault(_local_key(ls), ls)
    return [seen[k] for k in sorted(seen)]


def _local_key(ls: LocalSymbol) -> Tuple:
    return tuple((c.scale, c.dim, c.sign, c.odd, c.oddity) for c in ls.constituents)


def list_genus_symbols(n: int, dets: Iterable[int], even: bool = True, level: Optional[int] = None,
                       maximal: bool = False) -> List[GenusSymbol]:
    """满足行列式/级/极大性约束、且通过奇性公式的全部正定亏格符号。

    level 给定时要求 √level·L* 为偶格 (即亏格的级整除 level)。
    """
    out: List[GenusSymbol] = []
    seen = set()
    for D in sorted(set(int(d) for d in dets)):
        if D < 1:
            raise ValueError("行列式必须为正整数")
        if level is not None and any(level % p for p in prime_divisors(D)):
            continue
        primes = sorted(set([2] + prime_divisors(D)))
        per_prime: List[List[LocalSymbol]] = []
        for p in primes:
            e = valuation(level, p) if level is not None and level % p == 0 else (0 if level is not None else None)
            lst = local_symbols(p, n, D, even=even, max_scale=e, level_exponent=e if p == 2 else None)
            per_prime.append(lst)
        for combo in product(*per_prime):
            g = GenusSymbol(n=n, locals=list(combo))
            if not milgram_check(g).ok:
                continue
            if level is not None and level % symbol_level(g):
                continue
            if maximal and not is_maximal_symbol(g):
                continue
            key = genus_key(g)
            if key in seen:
                continue
            seen.add(key)
            out.append(g)
    logger.info("亏格符号枚举: n=%d 共 %d 个", n, len(out))
    return out

# ---------------- 质量公式 ----------------

def _species(p: int, blocks: Dict[int, JordanConstituent], s: int) -> int:
    """第 s 个分量的 species; p = 2 时空分量也参与 (bound 的空分量 species 为 1)。"""
    c = blocks.get(s)
    n = c.dim if c is not None else 0
    if p != 2:
        if n % 2:
            return n
        chi = int(sympy.legendre_symbol((-1) % p, p)) ** (n // 2) * c.sign
        return n if chi == 1 else -n
    odd = c is not None and c.odd
    bound = any(blocks.get(s + d) is not None and blocks[s + d].odd for d in (-1, 1))
    t = n // 2 if (not odd or n % 2) else n // 2 - 1
    if bound:
        return 2 * t + 1
    if c is None:
        return 0
    if odd:
        octane = (c.oddity + (4 if c.sign == -1 else 0)) % 8
    else:
        octane = 0 if c.sign == 1 else 4
    if octane in (0, 1, 7):
        return 2 * t
    if octane in (3, 4, 5):
        return -2 * t
    return 2 * t + 1


def _species_factor(p: int, s: int) -> sympy.Expr:
    if s == 0:
        return sympy.Integer(1)
    P = sympy.Integer(p)
    k = abs(s)
    out = sympy.Integer(2)
    for i in range(2, k - 1 if s % 2 == 0 else k, 2):
        out *= 1 - P ** (-i)
    if s % 2 == 0:
        sign = 1 if s > 0 else -1
        out *= 1 - sign * P ** sympy.Rational(-k, 2)
    return 1 / out


def _local_mass(ls: LocalSymbol) -> sympy.Expr:
    p = ls.p
    cs = _merged(ls)
    blocks: Dict[int, JordanConstituent] = {c.scale: c for c in cs}
    top = max(blocks, default=0)
    # p = 2 时在两端各补一个空分量
    scales = range(-1, top + 2) if p == 2 else sorted(blocks)
    out = sympy.Integer(1)
    for s in scales:
        out *= _species_factor(p, _species(p, blocks, s))
    doubled = sum((b.scale - a.scale) * a.dim * b.dim for a in cs for b in cs if a.scale < b.scale)
    out *= sympy.Integer(p) ** sympy.Rational(doubled, 2)
    if p == 2:
        n11 = sum(1 for c in cs if c.odd and blocks.get(c.scale + 1) is not None and blocks[c.scale + 1].odd)
        n2 = sum(c.dim for c in cs if not c.odd)
        out *= sympy.Integer(2) ** (n11 - n2)
    return out


def _bernoulli_chi(k: int, D: int) -> Fraction:
    """广义 Bernoulli 数 B_{k,χ_D}, D 为基本判别式。"""
    f = abs(D)
    if f > 10 ** 6:
        raise ValueError(f"判别式 {D} 过大, 不计算广义 Bernoulli 数")
    B = [Fraction(1), Fraction(-1, 2)]
    for j in range(2, k + 1):
        b = sympy.Rational(sympy.bernoulli(j))
        B.append(Fraction(int(b.p), int(b.q)))
    chi = [0] + [kronecker(D, r) for r in range(1, f + 1)]
    total = Fraction(0)
    for j in range(k + 1):
        if B[j] == 0:
            continue
        power_sum = sum(chi[r] * r ** (k - j) for r in range(1, f + 1))
        total += comb(k, j) * B[j] * Fraction(power_sum, f ** (k - j))
    return total * f ** (k - 1)


def _l_value(s: int, D: int) -> sympy.Expr:
    f0 = fundamental_discriminant(D)
    if f0 == 1:
        return sympy.zeta(s)
    f = abs(f0)
    a = 0 if f0 > 0 else 1
    if (s - a) % 2:
        raise ValueError("特征奇偶性与 s 不匹配")
    b = _bernoulli_chi(s, f0)
    sign = -1 if ((s - a) // 2) % 2 == 0 else 1
    return (sign * sympy.sqrt(f) / 2 * (2 * sympy.pi / f) ** s
            * sympy.Rational(b.numerator, b.denominator) / sympy.factorial(s))


def _standard_mass(n: int, D: int) -> sympy.Expr:
    s = n // 2 if n % 2 == 0 else (n + 1) // 2
    out = 2 * sympy.pi ** sympy.Rational(-n * (n + 1), 4)
    for j in range(1, n + 1):
        out *= sympy.gamma(sympy.Rational(j, 2))
    for k in range(1, s):
        out *= sympy.zeta(2 * k)
    if n % 2 == 0:
        out *= _l_value(s, (-1) ** s * D)
    return out


def _standard_local(p: int, n: int, D: int) -> sympy.Expr:
    s = n // 2 if n % 2 == 0 else (n + 1) // 2
    P = sympy.Integer(p)
    out = sympy.Integer(2)
    for i in range(1, s):
        out *= 1 - P ** (-2 * i)
    if n % 2 == 0:
        chi = kronecker(fundamental_discriminant((-1) ** s * D), p)
        out *= 1 - chi * P ** (-s)
    return 1 / out


def mass(g: GenusSymbol) -> Fraction:
    """正定亏格的质量 Σ 1/|Aut(L_i)| (标准质量乘以各 p | 2det 的局部修正)。"""
    if not milgram_check(g).ok:
        raise ValueError(f"符号 {g.render()} 不满足奇性公式, 不可实现")
    n, D = g.n, g.det()
    total = _standard_mass(n, D)
    for p in sorted(set([2] + prime_divisors(D))):
        ls = g.local(p)
        if ls is None:
            ls = LocalSymbol(p=p, constituents=[JordanConstituent(scale=0, dim=n, sign=_det_unit_sign(D, p))])
        total *= _local_mass(ls) / _standard_local(p, n, D)
    total = sympy.simplify(total)
    if not total.is_Rational:
        raise RuntimeError(f"质量未化简为有理数: {total}")
    out = Fraction(int(total.p), int(total.q))
    logger.debug("质量 %s = %s", g.render(), out)
    return out
