"""命令行入口: dsperfect <组> <命令> [参数]

退出码: 0 成功 / 与预期一致, 1 与打印结果不一致, 2 输入错误。
"""
from __future__ import annotations
from pathlib import Path
from typing import Optional, Sequence
import argparse
import sys

from ._version import get_version
from .catalog import catalog
from .config import load_config
from .design_engine import strong_perfection_report
from .genus_tools import genus_symbol, list_genus_symbols, mass, milgram_check, parse_genus_symbol
from .lattice_core import Lattice, minimum_and_layer
from .neighbors import enumerate_genus, save_enumeration, sublattice_descent
from .param_search import general_type_search, minimal_cases_table, minimal_type_search, triples_table
from .pipeline import VERIFY_CHECKS, classify14, verify_lattice
from .theta_forms import (
    feasible_space, load_problem, qs_add, qs_div, qs_mul, qs_scale, read_qseries, theta, write_qseries,
)
from .utils import format_rational, logger, parse_rational, render_table, write_csv

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_DISCREPANCY = 1
EXIT_INPUT = 2


def _lattice(arg: str) -> Lattice:
    """已存在的文件按 Gram 文件读取, 否则按目录名构造。"""
    path = Path(arg)
    if path.is_file():
        return Lattice.load(path)
    return catalog(arg)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        logger.info("已写出 %s", out)
    else:
        print(text.rstrip("\n"))

# ---------------- lattice ----------------

def _cmd_lattice_info(args) -> int:
    L = _lattice(args.lattice)
    rows = [
        ("dim", L.dim),
        ("det", L.det),
        ("min", L.minimum),
        ("kissing", L.kissing_number),
        ("integral", L.is_integral()),
        ("even", L.is_even()),
        ("dual_min", L.dual().minimum),
    ]
    if L.is_integral():
        rows.append(("genus", genus_symbol(L).render() or "(unimodular)"))
    if args.csv:
        _emit(write_csv(["key", "value"], rows), args.out)
    else:
        _emit(render_table(["key", "value"], rows), args.out)
    return EXIT_OK


def _cmd_lattice_min(args) -> int:
    L = _lattice(args.lattice)
    m, layer = minimum_and_layer(L)
    lines = [f"min {format_rational(m)}", f"count {layer.count}"]
    if args.vectors:
        lines.extend(" ".join(str(x) for x in v) for v in layer.vectors)
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def _cmd_lattice_theta(args) -> int:
    L = _lattice(args.lattice)
    series = theta(L, parse_rational(args.bound), unit=parse_rational(args.unit) if args.unit else None)
    if args.out:
        write_qseries(series, args.out)
    else:
        print(series.to_text().rstrip("\n"))
    return EXIT_OK


def _cmd_lattice_verify(args) -> int:
    checks = args.checks.split(",") if args.checks else None
    bound = parse_rational(args.universal) if args.universal else None
    rep, stage = verify_lattice(args.path, checks=checks, universal_bound=bound,
                                expected_dim=None if args.any_dim else args.dim, config=load_config(args.config))
    lines = [rep.to_text()] + [f"{k}: {v}" for k, v in sorted(stage.detail.items())]
    _emit("\n".join(lines), args.out)
    return EXIT_DISCREPANCY if stage.verdict == "discrepancy" else EXIT_OK

# ---------------- design ----------------

def _cmd_design_check(args) -> int:
    L = _lattice(args.lattice)
    bound = parse_rational(args.universal) if args.universal else None
    rep = strong_perfection_report(L, universal_bound=bound)
    _emit(rep.to_text(), args.out)
    return EXIT_OK

# ---------------- params ----------------

def _cmd_params_general(args) -> int:
    cfg = load_config(args.config)
    rows = general_type_search(gamma_bound=cfg.gamma_bound, kissing_bound=cfg.kissing_bound,
                               s_lower_bound=cfg.s_lower_bound)
    _emit(triples_table(rows, as_csv=args.csv), args.out)
    return EXIT_OK


def _cmd_params_minimal(args) -> int:
    cases = minimal_type_search()
    if args.csv:
        text = write_csv(["case", "s1", "r"], [(c.label or "", c.s1, " ".join(format_rational(r) for r in c.r_values))
                                                for c in cases])
    else:
        text = minimal_cases_table(cases)
    _emit(text, args.out)
    return EXIT_OK

# ---------------- genus ----------------

def _cmd_genus_symbol(args) -> int:
    g = genus_symbol(_lattice(args.lattice))
    res = milgram_check(g)
    _emit(f"{g.render() or '(unimodular)'}\nmilgram {'ok' if res.ok else 'fail'}", args.out)
    return EXIT_OK


def _cmd_genus_mass(args) -> int:
    g = parse_genus_symbol(args.symbol, args.dim, even=not args.odd)
    _emit(format_rational(mass(g)), args.out)
    return EXIT_OK


def _cmd_genus_list(args) -> int:
    dets = [int(d) for d in args.dets.split(",")]
    found = list_genus_symbols(args.dim, dets, even=not args.odd, level=args.level, maximal=args.maximal)
    rows = [(g.det(), g.render()) for g in found]
    _emit(write_csv(["det", "symbol"], rows) if args.csv else render_table(["det", "symbol"], rows), args.out)
    return EXIT_OK


def _cmd_genus_enumerate(args) -> int:
    cfg = load_config(args.config)
    res = enumerate_genus(_lattice(args.lattice), p=args.prime, mass_ceiling=cfg.mass_ceiling,
                          strict=args.strict, budget=args.budget or cfg.genus_budget)
    if args.out_dir:
        save_enumeration(res, args.out_dir)
    rows = [(i, L.label or "", format_rational(L.minimum), a) for i, (L, a) in enumerate(zip(res.classes, res.aut_orders))]
    print(render_table(["class", "label", "min", "|Aut|"], rows))
    summary = res.summary()
    print(f"h {summary['h']} complete {summary['complete']} mass {summary['mass']}")
    if res.note:
        print(f"note {res.note}")
    return EXIT_OK


def _cmd_genus_descend(args) -> int:
    cfg = load_config(args.config)
    M = _lattice(args.lattice)
    dims = [int(d) for d in args.dims.split(",")] if args.dims else None
    res = sublattice_descent(M, args.prime, parse_rational(args.dual_min), parse_rational(args.target_min),
                             args.exponent or args.prime, budget=args.budget or cfg.descent_budget, dims=dims)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, L in enumerate(res.survivors):
            L.save(out / f"survivor_{i:03d}.gram")
    print(f"survivors {len(res.survivors)} nodes {res.nodes_visited} levels {res.levels} "
          f"budget_exhausted {res.budget_exhausted}")
    for L in res.survivors:
        print(f"det {format_rational(L.det)} min {format_rational(L.minimum)} kissing {L.kissing_number}")
    return EXIT_OK

# ---------------- qseries ----------------

def _cmd_qseries_ops(args) -> int:
    a = read_qseries(args.a)
    if args.op == "scale":
        res = qs_scale(a, parse_rational(args.b))
    else:
        b = read_qseries(args.b)
        res = {"add": qs_add, "mul": qs_mul, "div": qs_div}[args.op](a, b)
    if args.out:
        write_qseries(res, args.out)
    else:
        print(res.to_text().rstrip("\n"))
    return EXIT_OK


def _cmd_qseries_feasible(args) -> int:
    res = feasible_space(load_problem(args.problem, horizon=args.horizon))
    lines = [f"consistent {res.consistent}", f"feasible {res.feasible}", f"integral {res.integral}",
             f"free_parameters {len(res.directions)}"]
    if res.point is not None:
        lines.append("point " + " ".join(format_rational(x) for x in res.point))
    for k in sorted(res.witness):
        v = res.witness[k]
        lines.append(f"{k} {format_rational(v) if hasattr(v, 'denominator') else v}")
    _emit("\n".join(lines), args.out)
    return EXIT_OK

# ---------------- classify14 ----------------

def _cmd_classify14(args) -> int:
    cfg = load_config(args.config, run_slow=True if args.slow else None)
    report = classify14(args.mode, cfg)
    if args.csv:
        text = write_csv(["stage", "verdict", "citation"], [(s.stage, s.verdict, s.citation) for s in report.stages])
    else:
        text = report.to_text()
    _emit(text, args.out)
    return EXIT_DISCREPANCY if report.has_discrepancy else EXIT_OK

# ---------------- 解析器 ----------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dsperfect", description="14 维对偶强完美格分类的精确计算工具")
    p.add_argument("--version", action="version", version=f"%(prog)s {get_version()}")
    groups = p.add_subparsers(dest="group", required=True)

    def command(sub, name: str, func, help_text: str, out: bool = True, config: bool = False):
        c = sub.add_parser(name, help=help_text)
        c.set_defaults(func=func)
        if out:
            c.add_argument("--out", help="写入文件而不是标准输出")
        if config:
            c.add_argument("--config", help="key=value 配置文件")
        return c

    lat = groups.add_parser("lattice", help="单个格的不变量").add_subparsers(dest="cmd", required=True)
    c = command(lat, "info", _cmd_lattice_info, "行列式、最小范数、亲吻数与亏格符号")
    c.add_argument("lattice", help="目录名 (如 E6+E8) 或 Gram 文件")
    c.add_argument("--csv", action="store_true")
    c = command(lat, "min", _cmd_lattice_min, "最小范数与最小向量")
    c.add_argument("lattice")
    c.add_argument("--vectors", action="store_true", help="列出每对 ±v 的代表")
    c = command(lat, "theta", _cmd_lattice_theta, "θ 级数到范数 B")
    c.add_argument("lattice")
    c.add_argument("--bound", required=True, help="截断范数 B")
    c.add_argument("--unit", help="范数量子, 默认取 Gram 分母的倒数")
    c = command(lat, "verify", _cmd_lattice_verify, "设计、对偶设计、万有完美与模性证书", config=True)
    c.add_argument("path", help="Gram 文件")
    c.add_argument("--checks", help=f"逗号分隔, 可选 {','.join(VERIFY_CHECKS)}")
    c.add_argument("--universal", help="万有完美检查的范数上界")
    c.add_argument("--dim", type=int, default=14)
    c.add_argument("--any-dim", action="store_true", help="不做维数检查")

    des = groups.add_parser("design", help="球面设计检查").add_subparsers(dest="cmd", required=True)
    c = command(des, "check", _cmd_design_check, "最小层与对偶最小层的 4-设计检查")
    c.add_argument("lattice")
    c.add_argument("--universal", help="万有完美检查的范数上界")

    par = groups.add_parser("params", help="参数搜索").add_subparsers(dest="cmd", required=True)
    c = command(par, "general", _cmd_params_general, "一般型 (n2, s, r) 表", config=True)
    c.add_argument("--csv", action="store_true")
    c = command(par, "minimal", _cmd_params_minimal, "最小型情形 (a)-(p)")
    c.add_argument("--csv", action="store_true")

    gen = groups.add_parser("genus", help="亏格符号、质量、枚举与下降").add_subparsers(dest="cmd", required=True)
    c = command(gen, "symbol", _cmd_genus_symbol, "整格的亏格符号")
    c.add_argument("lattice")
    c = command(gen, "mass", _cmd_genus_mass, "亏格符号的质量")
    c.add_argument("symbol", help="如 '2^2_6' 或 '3^-1 5^1'")
    c.add_argument("--dim", type=int, default=14)
    c.add_argument("--odd", action="store_true", help="奇格亏格")
    c = command(gen, "list", _cmd_genus_list, "给定行列式与级的全部亏格符号")
    c.add_argument("--dets", required=True, help="逗号分隔的行列式")
    c.add_argument("--dim", type=int, default=14)
    c.add_argument("--level", type=int)
    c.add_argument("--maximal", action="store_true")
    c.add_argument("--odd", action="store_true")
    c.add_argument("--csv", action="store_true")
    c = command(gen, "enumerate", _cmd_genus_enumerate, "邻格法枚举亏格 (质量证书)", out=False, config=True)
    c.add_argument("lattice")
    c.add_argument("--prime", type=int)
    c.add_argument("--budget", type=int)
    c.add_argument("--strict", action="store_true", help="质量超过上限时报错")
    c.add_argument("--out-dir", help="写出 Gram 文件与 manifest.json 的目录")
    c = command(gen, "descend", _cmd_genus_descend, "子格下降 (指数 p 或无平方因子的指数)", out=False, config=True)
    c.add_argument("lattice")
    c.add_argument("--prime", type=int, required=True)
    c.add_argument("--exponent", type=int, help="L*/L 的指数界, 默认等于 --prime")
    c.add_argument("--dual-min", required=True, help="对偶最小范数下界")
    c.add_argument("--target-min", required=True, help="子格最小范数")
    c.add_argument("--dims", help="只检查这些层 (逗号分隔)")
    c.add_argument("--budget", type=int)
    c.add_argument("--out-dir")

    qs = groups.add_parser("qseries", help="q 级数运算与可行性").add_subparsers(dest="cmd", required=True)
    c = command(qs, "ops", _cmd_qseries_ops, "加、乘、除与数乘")
    c.add_argument("op", choices=["add", "mul", "div", "scale"])
    c.add_argument("a", help="q 级数文件")
    c.add_argument("b", help="q 级数文件; scale 时为有理数")
    c = command(qs, "feasible", _cmd_qseries_feasible, "非负可行性判定")
    c.add_argument("problem", help="*.problem 描述文件")
    c.add_argument("--horizon", type=int, help="文件未给出 horizon 时使用")

    c = groups.add_parser("classify14", help="运行分类流水线")
    c.set_defaults(func=_cmd_classify14)
    c.add_argument("--mode", choices=["general", "minimal", "full"], default="full")
    c.add_argument("--config", help="key=value 配置文件")
    c.add_argument("--slow", action="store_true", help="运行完整枚举与完整下降")
    c.add_argument("--csv", action="store_true")
    c.add_argument("--out")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"错误: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
