"""通用工具: 日志、有理数解析/格式化、数论辅助、表格输出

新增:
    - parse_rational / format_rational: 统一 `p/q` 文本格式
    - squarefree_part / kronecker: 平方类与二次特征
    - render_table / write_csv: 命令行表格与 CSV 输出
"""
from __future__ import annotations
from fractions import Fraction
from typing import Iterable, List, Sequence, Union
import csv
import io
import logging
import os
import re

import sympy

# 初始化日志
logger = logging.getLogger("dsperfect")
if not logger.handlers:
    _handler = logging.StreamHandler()
    _formatter = logging.Formatter("[%(asctime)s] %(levelname)s %(name)s: %(message)s")
    _handler.setFormatter(_formatter)
    logger.addHandler(_handler)
log_level = os.getenv("DSPERFECT_LOG_LEVEL", "INFO").upper()
try:
    logger.setLevel(getattr(logging, log_level, logging.INFO))
except Exception:
    logger.setLevel(logging.INFO)

__all__ = [
    "logger", "RationalLike", "as_fraction", "parse_rational", "format_rational",
    "squarefree_part", "kronecker", "prime_divisors", "valuation",
    "fundamental_discriminant", "render_table", "write_csv",
]

RationalLike = Union[int, str, Fraction]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_DEC_RE = re.compile(r"^\s*[+-]?\d*\.\d+\s*$")


def parse_rational(text: str) -> Fraction:
    """解析 `p/q`、整数或有限小数字符串为 Fraction (最简形式)。"""
    if not isinstance(text, str):
        raise TypeError("parse_rational 仅接受字符串")
    m = _RAT_RE.match(text)
    if m:
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"分母为零: {text!r}")
        return Fraction(num, den)
    if _DEC_RE.match(text):
        # 2.776 之类的配置常数按精确十进制读入
        return Fraction(text.strip())
    raise ValueError(f"无法解析有理数: {text!r}")


def as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("布尔值不是有理数")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"不支持的有理数输入类型: {type(value).__name__}")


def format_rational(x: RationalLike) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

# ---------------- 数论辅助 ----------------

def prime_divisors(n: int) -> List[int]:
    """|n| 的素因子 (升序)。"""
    n = abs(int(n))
    if n < 2:
        return []
    return sorted(sympy.factorint(n).keys())


def valuation(x: RationalLike, p: int) -> int:
    """p 进赋值 v_p(x)，x ≠ 0。"""
    x = as_fraction(x)
    if x == 0:
        raise ValueError("0 的赋值无定义")
    v = 0
    num, den = abs(x.numerator), x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def squarefree_part(d: RationalLike) -> int:
    """d > 0 的平方类代表: 分子·分母的无平方因子核。"""
    d = as_fraction(d)
    if d <= 0:
        raise ValueError("square_class 需要正有理数")
    out = 1
    for p, e in sympy.factorint(d.numerator * d.denominator).items():
        if e % 2:
            out *= p
    return out


def kronecker(a: int, n: int) -> int:
    """Kronecker 符号 (a/n)，n ≥ 0; (a/0) = 1 当且仅当 a = ±1。"""
    if n < 0:
        raise ValueError(f"kronecker 需要 n ≥ 0, 得到 {n}")
    if n == 0:
        return 1 if a in (1, -1) else 0
    return int(sympy.jacobi_symbol(a % n, n)) if n % 2 else _kronecker_even(a, n)


def _kronecker_even(a: int, n: int) -> int:
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(sympy.jacobi_symbol(a % n, n))


def fundamental_discriminant(D: int) -> int:
    """整数 D ≠ 0 对应二次域的基本判别式 (D 为平方数时返回 1)。"""
    if D == 0:
        raise ValueError("判别式不能为 0")
    sign = -1 if D < 0 else 1
    core = sign * squarefree_part(abs(D))
    if core == 1:
        return 1
    return core if core % 4 == 1 else 4 * core

# ---------------- 表格输出 ----------------

def render_table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """对齐的纯文本表格。"""
    body = [[_cell(c) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in body:
        for i, c in enumerate(row):
            widths[i] = max(widths[i], len(c))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    return "\n".join(lines)


def write_csv(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([_cell(c) for c in row])
    return buf.getvalue()


def _cell(c: object) -> str:
    if isinstance(c, Fraction):
        return format_rational(c)
    return str(c)
