"""常量定义模块: 外部引用的界与复现用的表格数据"""
from fractions import Fraction
from typing import Dict, List, Tuple

# 维数 14 Hermite 常数上界 γ_14 ≤ 2.776 (外部结果, 作为配置常数)
GAMMA14_BOUND: Fraction = Fraction(2776, 1000)
# 维数 14 亲吻数上界: s ≤ 1746 (半亲吻数)
KISSING_BOUND_14: int = 1746
# 4-设计下界 n(n+1)/2 = 105
S_LOWER_BOUND_14: int = 105

# 一般型 (n2, s, r) 表: 17 行 (r > 16/3)
GENERAL_TYPE_TABLE: List[Tuple[int, int, Fraction]] = [
    (2, 324, Fraction(56, 9)),
    (2, 448, Fraction(6)),
    (2, 1200, Fraction(28, 5)),
    (3, 486, Fraction(56, 9)),
    (3, 672, Fraction(6)),
    (4, 225, Fraction(112, 15)),
    (4, 343, Fraction(48, 7)),
    (4, 363, Fraction(224, 33)),
    (4, 525, Fraction(32, 5)),
    (5, 384, Fraction(7)),
    (5, 504, Fraction(20, 3)),
    (8, 450, Fraction(112, 15)),
    (8, 567, Fraction(64, 9)),
    (11, 672, Fraction(22, 3)),
    (12, 675, Fraction(112, 15)),
    (19, 968, Fraction(84, 11)),
    (20, 1029, Fraction(160, 21)),
]

# 定理结论中的幸存情形 (一般型); 最小型另行标记
GENERAL_TYPE_SURVIVORS: List[Tuple[int, Fraction]] = [
    (672, Fraction(6)),
    (672, Fraction(22, 3)),
    (504, Fraction(20, 3)),
]

# 最小型 (s1 -> r 集) 打印表, 键为情形标签
MINIMAL_TYPE_TABLE: Dict[str, Tuple[Tuple[int, ...], Tuple[Fraction, ...]]] = {
    'a': ((6, 12, 18, 30, 36, 42), (Fraction(8), Fraction(32, 3))),
    'b': ((10, 14, 20, 22, 26, 28, 34, 38, 44, 46, 52), (Fraction(8),)),
    'c': ((9, 15, 21, 33, 39, 45, 51, 57, 60, 63, 66, 69, 78), (Fraction(32, 3),)),
    'd': ((8, 16, 40, 56, 80), (Fraction(8), Fraction(28, 3))),
    'e': ((24,), (Fraction(20, 3), Fraction(8), Fraction(28, 3), Fraction(32, 3))),
    'f': ((25,), (Fraction(32, 5), Fraction(128, 15), Fraction(48, 5))),
    'g': ((27,), (Fraction(64, 9), Fraction(80, 9), Fraction(32, 3))),
    'h': ((32,), (Fraction(6), Fraction(22, 3), Fraction(8), Fraction(28, 3), Fraction(10))),
    'i': ((48,), (Fraction(8), Fraction(28, 3), Fraction(32, 3))),
    'j': ((49,), (Fraction(64, 7), Fraction(208, 21))),
    'k': ((50,), (Fraction(8), Fraction(128, 15), Fraction(48, 5), Fraction(152, 15))),
    'l': ((54,), (Fraction(80, 9), Fraction(88, 9), Fraction(32, 3))),
    'm': ((64,), (Fraction(28, 3), Fraction(10))),
    'n': ((72,), (Fraction(28, 3), Fraction(32, 3))),
    'o': ((75,), (Fraction(128, 15), Fraction(48, 5), Fraction(32, 3))),
    'p': ((81,), (Fraction(80, 9), Fraction(32, 3))),
}
# 最小型对偶强完美: 两侧 s1, t1 的可能值
MINIMAL_SURVIVOR_S: Tuple[int, ...] = (6, 12, 18, 24, 27, 30, 32, 36, 42, 48, 50, 54, 75)
# 集合 A: s1, t1 都落在 A 中时交给指数 3 的子格下降
MINIMAL_A: Tuple[int, ...] = (6, 12, 18, 30, 36, 42)
MINIMAL_PAIR_SUM_BOUND: int = 83

# 级整除 12 的极大偶格亏格 (维数 14): 符号 -> (级, 类数, 代表, 打印质量)
LEVEL12_GENERA: Dict[str, Tuple[int, int, str, Fraction]] = {
    '3^1': (3, 2, 'E6+E8', Fraction(691, 2**23 * 3**9 * 5**3 * 7 * 11 * 13)),
    '2^2_6': (4, 4, 'D14', Fraction(42151, 2**25 * 3**8 * 5**3 * 7**2 * 11 * 13)),
    '2^2_0 3^1': (12, 8, 'E8+A5+(2)', Fraction(29713, 2**17 * 3**8 * 5**3 * 7 * 11 * 13)),
    '2^{-2} 3^{-1}': (6, 6, 'A2+D12', Fraction(29713, 2**24 * 3**9 * 5**2 * 7 * 11)),
    '2^2_2 3^2': (12, 28, 'A2+A2+E8+(2)+(2)', Fraction(1683131581, 2**25 * 3**8 * 5**2 * 7**2 * 11 * 13)),
}

# s=450 情形的 8 个亏格: 打印符号 -> (类数, 打印质量); 2^{-2}_0 即偶型分量 2^{-2}_II
S450_GENERA: Dict[str, Tuple[int, Fraction]] = {
    '3^1': (2, Fraction(691, 2**23 * 3**9 * 5**3 * 7 * 11 * 13)),
    '3^{-1} 5^1': (8, Fraction(650231, 2**21 * 3**8 * 5**3 * 7**2 * 13)),
    '3^1 5^{-1}': (9, Fraction(650231, 2**21 * 3**8 * 5**3 * 7**2 * 13)),
    '3^{-1} 5^{-2}': (48, Fraction(5407504111, 2**23 * 3**9 * 5**3 * 7 * 11)),
    '2^2_0 3^1 5^{-1}': (93, Fraction(82579337, 2**15 * 3**8 * 5**3 * 7**2 * 13)),
    '2^2_0 3^{-1} 5^1': (91, Fraction(82579337, 2**15 * 3**8 * 5**3 * 7**2 * 13)),
    '2^{-2}_0 3^1 5^1': (46, Fraction(82579337, 2**22 * 3**7 * 5**3 * 7 * 13)),
    '2^{-2}_0 3^{-1} 5^{-1}': (48, Fraction(82579337, 2**22 * 3**7 * 5**3 * 7 * 13)),
}
S450_CLASS_NUMBERS: Tuple[int, ...] = tuple(v[0] for v in S450_GENERA.values())
S450_TOTAL_CLASSES: int = 345
# s=450: 极大偶上格 M 的可能行列式
S450_DETS: Tuple[int, ...] = (3, 15, 75, 60)

# 打印的 θ 与尖形式 (范数单位 1, 下标为范数)
PRINTED_THETA_504: Dict[int, int] = {0: 1, 10: 1008, 12: 1896, 14: 43124, 16: -210044, 18: 340244, 20: 755692}
PRINTED_CUSP_504: Dict[int, int] = {12: 1, 14: -11, 16: 44, 18: -51, 20: -154}

# 极小型目标: [±G2(3)]_14 的已知不变量 (最小 4 的偶标度)
G2_3_MIN: int = 4
G2_3_DUAL_MIN: Fraction = Fraction(4, 3)
G2_3_KISSING: int = 756
G2_3_DET: int = 3**7
# s=450: 上格 M 的对偶最小范数须达到的下界
S450_DUAL_MIN_BOUND: Fraction = Fraction(28, 15)

# 最小型 (s1, t1) 终局中需要 θ 可行性的两组亏格数
PAIR_THETA_GENERA: Dict[str, int] = {'pair_24_24': 176, 'pair_other': 149}
