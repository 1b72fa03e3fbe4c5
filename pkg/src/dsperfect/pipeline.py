"""14 维对偶强完美格分类的复现流水线

阶段按论证顺序依次运行, 每个阶段给出一个结论:
    reproduced / contradiction-confirmed / external-data-needed / discrepancy / budget-limited
缺少外部数据或超出预算的阶段照常记录, 流水线继续运行。
"""
from __future__ import annotations
from fractions import Fraction
from itertools import combinations_with_replacement
from math import lcm
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from ._version import get_version
from .catalog import catalog
from .config import PipelineConfig, load_config
from .constants import (
    G2_3_DET, G2_3_DUAL_MIN, G2_3_KISSING, G2_3_MIN, GENERAL_TYPE_SURVIVORS, GENERAL_TYPE_TABLE,
    LEVEL12_GENERA, MINIMAL_TYPE_TABLE, PAIR_THETA_GENERA, S450_DETS,
    S450_DUAL_MIN_BOUND, S450_GENERA, S450_TOTAL_CLASSES,
)
from .design_engine import antipodal_report, n2_config, strong_perfection_report
from .genus_tools import genus_key, genus_symbol, list_genus_symbols, mass, parse_genus_symbol, same_genus
from .lattice_core import Lattice, is_isometric, minimum_and_layer, orthogonal_sum
from .models import DesignReport, GenusSymbol, ParamTriple, PipelineReport, StageResult
from .neighbors import enumerate_genus, g2_3_from_e6e8, sublattice_descent
from .param_search import (
    exclusion_report, general_type_search, minimal_pair_grid, minimal_type_search, s32_check,
)
from .theta_forms import feasible_space, fricke_lattice, load_problem
from .utils import format_rational, logger, valuation

__all__ = ["classify14", "verify_lattice", "STAGE_COVERAGE", "VERIFY_CHECKS", "lattice_level"]

# 阶段 -> 所复现的论证步骤; 报告的 final.coverage 逐项列出
STAGE_COVERAGE: Dict[str, str] = {
    "general-type-search": "一般型 (n2, s, r) 参数搜索: 17 行表与最小型标记",
    "general-type-exclusion": "一般型逐情形排除, 剩余 (672,6), (672,22/3), (504,20/3) 与 s=450",
    "s450-genus-list": "s=450: 极大偶上格可能的亏格 (行列式 3, 15, 75, 60), 3 的指数为奇",
    "s450-genus-mass": "s=450: 各亏格的质量",
    "s450-enumeration": "s=450: 345 个格中没有对偶最小范数 ≥ 28/15 的",
    "level12-genera": "级整除 12 的偶格亏格表与质量",
    "dual-type-exclusion": "对偶强完美时一般型情形的排除: (672,6) 设计正性, (672,22/3) 对偶迹 3, 留下 s=504",
    "theta-general_504": "s=504: θ_Γ = T + a·f0 无非负解",
    "minimal-type-search": "最小型 s1 参数搜索: 情形 (a)-(p)",
    "minimal-type-cases": "最小型逐情形排除",
    "s32-gram-analysis": "s1=32: a4 奇偶性、t2 上界与 Gram 块行列式的平方类",
    "minimal-pair-grid": "(s1, t1) 网格: s1 + t1 ≤ 83 与 3 | s1·t1",
    "theta-pair_24_24": "(s1, t1) = (24, 24): 176 个亏格上的 θ 可行性",
    "theta-pair_other": "其余 θ 交接对: 149 个亏格上的 θ 可行性",
    "descent-e3": "E6⊥E8 中指数 3 幂的子格下降, 得到 [±G2(3)]_14",
    "descent-e6": "E6⊥E8 与 A2⊥D12 亏格中的指数 6 下降",
    "g2-3-verify": "[±G2(3)]_14: 强完美、对偶强完美, γ = 16/3",
    "verify-lattice": "单个格的设计与模性证书",
}

VERIFY_CHECKS: Tuple[str, ...] = (
    "integral", "min", "kissing", "design", "dual_design", "universal", "modular", "n2", "antipodal",
)

_MODES = ("general", "minimal", "full")


def _stage(stage: str, verdict: str, detail: Optional[Dict[str, object]] = None,
           artifacts: Optional[List[str]] = None) -> StageResult:
    st = StageResult(stage=stage, verdict=verdict, citation=STAGE_COVERAGE.get(stage, ""),
                     detail=detail or {}, artifacts=artifacts or [])
    log = logger.warning if verdict in ("discrepancy", "budget-limited", "external-data-needed") else logger.info
    log("阶段 %s: %s", stage, verdict)
    return st


def _pair(s: int, r: Fraction) -> str:
    return f"({s}, {format_rational(r)})"

# ---------------- 一般型 ----------------

def _general_search(config: PipelineConfig) -> Tuple[StageResult, list]:
    rows = general_type_search(gamma_bound=config.gamma_bound, kissing_bound=config.kissing_bound,
                               s_lower_bound=config.s_lower_bound)
    got = {(t.n2, t.s, t.r) for t in rows}
    expected = set(GENERAL_TYPE_TABLE)
    detail: Dict[str, object] = {"rows": len(rows)}
    if got != expected:
        detail["extra"] = sorted(f"{n2},{s},{format_rational(r)}" for n2, s, r in got - expected)
        detail["missing"] = sorted(f"{n2},{s},{format_rational(r)}" for n2, s, r in expected - got)
        return _stage("general-type-search", "discrepancy", detail), rows
    return _stage("general-type-search", "reproduced", detail), rows


def _general_exclusion(rows, config: PipelineConfig) -> Tuple[StageResult, List[Tuple[int, Fraction]]]:
    survivors: List[Tuple[int, Fraction]] = []
    fired: Dict[str, str] = {}
    for t in rows:
        v = exclusion_report(t, gamma_bound=config.gamma_bound)
        if v.excluded:
            fired[_pair(t.s, t.r)] = v.rule
        else:
            survivors.append((t.s, t.r))
    detail: Dict[str, object] = {"rules": fired, "survivors": [_pair(s, r) for s, r in survivors]}
    # s = 450 在亏格阶段排除
    rest = {c for c in survivors if c[0] != 450}
    ok = rest == set(GENERAL_TYPE_SURVIVORS) and any(s == 450 for s, _ in survivors)
    return _stage("general-type-exclusion", "reproduced" if ok else "discrepancy", detail), survivors


def _printed_keys(symbols: Iterable[str]) -> Dict[Tuple, str]:
    return {genus_key(parse_genus_symbol(sym, 14)): sym for sym in symbols}


def _s450_genus_list() -> StageResult:
    listed = list_genus_symbols(14, S450_DETS)
    ours = {genus_key(g) for g in listed}
    printed = _printed_keys(S450_GENERA)
    missing = [sym for key, sym in printed.items() if key not in ours]
    wide = list_genus_symbols(14, [3 ** b * 5 ** c for b in range(4) for c in range(3)])
    odd_three = all(valuation(g.det(), 3) % 2 == 1 for g in wide)
    detail: Dict[str, object] = {
        "listed": len(listed),
        "printed": len(printed),
        "missing_printed": missing,
        "dets_3a5b": sorted({g.det() for g in wide}),
        "three_exponent_odd": odd_three,
    }
    ok = not missing and odd_three
    return _stage("s450-genus-list", "reproduced" if ok else "discrepancy", detail)


def _mass_stage(stage: str, table: Dict[str, tuple]) -> StageResult:
    detail: Dict[str, object] = {}
    bad: List[str] = []
    for sym, row in table.items():
        printed = row[-1]
        try:
            ours = mass(parse_genus_symbol(sym, 14))
        except ValueError as exc:
            detail[sym] = f"不可实现: {exc}"
            bad.append(sym)
            continue
        detail[sym] = format_rational(ours)
        if ours != printed:
            detail[f"{sym} (printed)"] = format_rational(printed)
            bad.append(sym)
    detail["mismatched"] = bad
    return _stage(stage, "discrepancy" if bad else "reproduced", detail)


_SEED_PIECES: Tuple[str, ...] = (
    'E8', 'E7', 'E6', 'D4', 'D5', 'D6', 'D7', 'D8', 'D10', 'D12', 'D14',
    'A1', 'A2', 'A3', 'A4', 'A5', 'A6', 'A7', 'A14', 'L4',
)


def _find_seed(g: GenusSymbol, max_parts: int = 4) -> Optional[Lattice]:
    """在根格与 L4 的正交和中寻找给定亏格的代表。"""
    pieces = [catalog(name, validate=False) for name in _SEED_PIECES]
    for k in range(1, max_parts + 1):
        for combo in combinations_with_replacement(range(len(pieces)), k):
            parts = [pieces[i] for i in combo]
            if sum(P.dim for P in parts) != g.n:
                continue
            det = Fraction(1)
            for P in parts:
                det *= P.det
            if det != g.det():
                continue
            L = orthogonal_sum(*parts, label="+".join(_SEED_PIECES[i] for i in combo))
            if same_genus(genus_symbol(L), g):
                return L
    return None


def _s450_enumeration(config: PipelineConfig) -> StageResult:
    detail: Dict[str, object] = {"printed_total": S450_TOTAL_CLASSES}
    if not config.run_slow:
        detail["note"] = "未开启 run_slow, 跳过 8 个亏格的完整枚举"
        detail["recount_printed"] = sum(v[0] for v in S450_GENERA.values())
        return _stage("s450-enumeration", "budget-limited", detail)
    total = 0
    incomplete: List[str] = []
    violators: List[str] = []
    for sym, (h, _) in S450_GENERA.items():
        seed = _find_seed(parse_genus_symbol(sym, 14))
        if seed is None:
            incomplete.append(f"{sym}: 未找到代表")
            continue
        res = enumerate_genus(seed, mass_ceiling=config.mass_ceiling, budget=config.genus_budget)
        total += len(res.classes)
        detail[sym] = {"h": len(res.classes), "printed_h": h, "complete": res.complete}
        if not res.complete:
            incomplete.append(sym)
        for L in res.classes:
            if L.dual().minimum >= S450_DUAL_MIN_BOUND:
                violators.append(f"{sym}: {L.label}")
    detail.update(recount=total, incomplete=incomplete, violators=violators)
    if violators:
        return _stage("s450-enumeration", "discrepancy", detail)
    if incomplete:
        return _stage("s450-enumeration", "budget-limited", detail)
    if total != S450_TOTAL_CLASSES:
        return _stage("s450-enumeration", "discrepancy", detail)
    return _stage("s450-enumeration", "contradiction-confirmed", detail)


def _level12_genera() -> StageResult:
    dets = sorted({parse_genus_symbol(sym, 14).det() for sym in LEVEL12_GENERA})
    listed = list_genus_symbols(14, dets, level=12)
    maximal = list_genus_symbols(14, dets, level=12, maximal=True)
    ours = {genus_key(g) for g in listed}
    printed = _printed_keys(LEVEL12_GENERA)
    missing = [sym for key, sym in printed.items() if key not in ours]
    detail: Dict[str, object] = {
        "listed": len(listed),
        "maximal": sorted(g.render() for g in maximal),
        "missing_printed": missing,
    }
    mass_stage = _mass_stage("level12-genera", LEVEL12_GENERA)
    detail.update(masses={k: v for k, v in mass_stage.detail.items() if k != "mismatched"},
                  mass_mismatched=mass_stage.detail["mismatched"])
    ok = not missing and not mass_stage.detail["mismatched"]
    return _stage("level12-genera", "reproduced" if ok else "discrepancy", detail)


def _dual_exclusion(survivors: Sequence[Tuple[int, Fraction]], config: PipelineConfig) -> StageResult:
    n2_of = {(s, r): n2 for n2, s, r in GENERAL_TYPE_TABLE}
    detail: Dict[str, object] = {}
    handed: List[str] = []
    for s, r in survivors:
        if s == 450:
            continue
        v = exclusion_report(ParamTriple(s=s, r=r, n2=n2_of.get((s, r), 0)), dual=True,
                             gamma_bound=config.gamma_bound)
        detail[_pair(s, r)] = v.rule
        if not v.excluded:
            handed.append(_pair(s, r))
    detail["theta_handoff"] = handed
    ok = handed == [_pair(504, Fraction(20, 3))]
    return _stage("dual-type-exclusion", "reproduced" if ok else "discrepancy", detail)

# ---------------- θ 级数 ----------------

def _theta_stage(name: str, config: PipelineConfig, expected_count: Optional[int] = None) -> StageResult:
    """运行 data_dir 中 `<name>*.problem` 描述的全部可行性问题; 期望全部不可行。"""
    stage = f"theta-{name}"
    root = Path(config.data_dir)
    files = sorted(root.glob(f"{name}*.problem")) if root.is_dir() else []
    if not files:
        return _stage(stage, "external-data-needed",
                      {"missing": f"{root}/{name}*.problem", "note": "需要外部生成的模形式空间基"})
    detail: Dict[str, object] = {"problems": len(files)}
    feasible: List[str] = []
    for f in files:
        res = feasible_space(load_problem(f, horizon=config.nonneg_horizon))
        info: Dict[str, object] = {"consistent": res.consistent, "feasible": res.feasible, "integral": res.integral}
        info.update({k: (format_rational(v) if isinstance(v, Fraction) else v) for k, v in res.witness.items()})
        if res.negative_index is not None:
            info["negative_index"] = res.negative_index
        detail[f.stem] = info
        if res.feasible:
            feasible.append(f.stem)
    detail["feasible"] = feasible
    artifacts = [str(f) for f in files]
    if feasible:
        return _stage(stage, "discrepancy", detail, artifacts)
    if expected_count is not None and len(files) != expected_count:
        detail["note"] = f"期望 {expected_count} 个亏格, 实际提供 {len(files)} 个问题文件"
        return _stage(stage, "external-data-needed", detail, artifacts)
    return _stage(stage, "contradiction-confirmed", detail, artifacts)

# ---------------- 最小型 ----------------

def _minimal_search() -> StageResult:
    cases = minimal_type_search()
    labelled = {c.label: c for c in cases if c.label}
    unlabelled = [c.s1 for c in cases if not c.label]
    off = {c.s1: {"extra": [format_rational(r) for r in c.extras], "missing": [format_rational(r) for r in c.missing]}
           for c in cases if c.extras or c.missing}
    covered = set(labelled) == set(MINIMAL_TYPE_TABLE)
    s1_expected = {s1 for s1s, _ in MINIMAL_TYPE_TABLE.values() for s1 in s1s}
    s1_found = {c.s1 for c in cases}
    detail: Dict[str, object] = {"cases": len(cases), "unlabelled": unlabelled, "borderline": off}
    ok = covered and s1_found == s1_expected and not off
    return _stage("minimal-type-search", "reproduced" if ok else "discrepancy", detail)


def _minimal_cases(config: PipelineConfig) -> StageResult:
    detail: Dict[str, object] = {}
    handed: List[str] = []
    for label in sorted(MINIMAL_TYPE_TABLE):
        v = exclusion_report(label, gamma_bound=config.gamma_bound)
        detail[f"({label})"] = v.rule
        if not v.excluded:
            handed.append(label)
    detail["pairs_handoff"] = handed
    return _stage("minimal-type-cases", "reproduced" if handed == ['a', 'e', 'h'] else "discrepancy", detail)


def _s32_stage() -> StageResult:
    out = s32_check()
    detail = {
        "a4_odd": out["a4_odd"],
        "t2_bound": format_rational(out["t2_bound"]),
        "all_v5_odd": out["all_v5_odd"],
    }
    ok = out["a4_odd"] and out["all_v5_odd"]
    return _stage("s32-gram-analysis", "contradiction-confirmed" if ok else "discrepancy", detail)


def _pair_grid() -> Tuple[StageResult, Dict[str, List[Tuple[int, int]]]]:
    verdicts = minimal_pair_grid()
    handoff: Dict[str, List[Tuple[int, int]]] = {}
    rules: Dict[str, int] = {}
    for v in verdicts:
        rules[v.rule] = rules.get(v.rule, 0) + 1
        if not v.excluded:
            pair = (v.detail["s1"], v.detail["t1"])
            key = v.handoff or "?"
            if v.handoff == "descent":
                key = f"descent-e{v.detail.get('e')}"
            handoff.setdefault(key, []).append(pair)
    bad = [p for pairs in handoff.values() for p in pairs if (p[0] * p[1]) % 3]
    detail: Dict[str, object] = {
        "rules": rules,
        "handoff": {k: len(v) for k, v in sorted(handoff.items())},
        "m3_violations": bad,
    }
    return _stage("minimal-pair-grid", "discrepancy" if bad else "reproduced", detail), handoff


def _genus_classes(name: str, config: PipelineConfig) -> Tuple[List[Lattice], bool]:
    res = enumerate_genus(catalog(name, validate=False), mass_ceiling=config.mass_ceiling, budget=config.genus_budget)
    return res.classes, res.complete


def _collect_descents(tops: Sequence[Lattice], L: Lattice, exponent: int, p: int,
                      config: PipelineConfig, detail: Dict[str, object]) -> Tuple[List[Lattice], bool]:
    """对每个上格做下降, 幸存格跨上格按同构去重; 返回 (幸存类, 是否耗尽预算)。"""
    found: List[Lattice] = []
    exhausted = False
    runs: List[Dict[str, object]] = []
    for M in tops:
        res = sublattice_descent(M, p, G2_3_DUAL_MIN, G2_3_MIN, exponent, budget=config.descent_budget)
        exhausted = exhausted or res.budget_exhausted
        runs.append({"det": format_rational(M.det), "dual_min": format_rational(M.dual().minimum),
                     "survivors": len(res.survivors), "nodes": res.nodes_visited})
        for S in res.survivors:
            if not any(is_isometric(S, T) for T in found):
                found.append(S)
    detail.update(runs=runs, classes=len(found), isometric_to_g2_3=[is_isometric(S, L) for S in found])
    return found, exhausted


def _g2_3(config: PipelineConfig) -> Tuple[StageResult, Optional[Lattice]]:
    try:
        path = Path(config.data_dir) / "g2_3_14.gram"
        L = Lattice.load(path) if path.exists() else g2_3_from_e6e8(budget=config.descent_budget)
    except RuntimeError as exc:
        return _stage("descent-e3", "budget-limited", {"error": str(exc)}), None
    detail: Dict[str, object] = {
        "det": format_rational(L.det), "min": format_rational(L.minimum), "kissing": L.kissing_number,
        "dual_min": format_rational(L.dual().minimum),
    }
    ok = (L.det == G2_3_DET and L.minimum == G2_3_MIN and L.kissing_number == G2_3_KISSING
          and L.dual().minimum == G2_3_DUAL_MIN)
    if not ok:
        return _stage("descent-e3", "discrepancy", detail), L
    if not config.run_slow:
        detail["note"] = "只构造了一个幸存格; 唯一性需要 run_slow 的完整下降"
        return _stage("descent-e3", "budget-limited", detail), L
    # 亏格 3^1 的两个类都作为上格
    tops, complete = _genus_classes('E6+E8', config)
    detail["genus_3_classes"] = len(tops)
    found, exhausted = _collect_descents(tops, L, 3, 3, config, detail)
    if exhausted or not complete:
        return _stage("descent-e3", "budget-limited", detail), L
    unique = len(found) == 1 and is_isometric(found[0], L)
    return _stage("descent-e3", "reproduced" if unique else "discrepancy", detail), L


def _descent_e6(L: Lattice, pairs: int, config: PipelineConfig) -> StageResult:
    """指数 6: 上格取亏格 3^1 的两类与亏格 2^{-2} 3^{-1} 中 min(M*) ≥ 4/3 的类。"""
    detail: Dict[str, object] = {"pairs": pairs}
    if not config.run_slow:
        detail["note"] = "未开启 run_slow, 跳过两个亏格的枚举与指数 6 下降"
        return _stage("descent-e6", "budget-limited", detail)
    three, ok3 = _genus_classes('E6+E8', config)
    a2d12, ok2 = _genus_classes('A2+D12', config)
    admissible = [M for M in a2d12 if M.dual().minimum >= G2_3_DUAL_MIN]
    detail.update(genus_3_classes=len(three), genus_a2d12_classes=len(a2d12), a2d12_admissible=len(admissible))
    found, exhausted = _collect_descents(three + admissible, L, 6, 2, config, detail)
    if exhausted or not (ok3 and ok2):
        return _stage("descent-e6", "budget-limited", detail)
    unique = len(found) == 1 and is_isometric(found[0], L)
    return _stage("descent-e6", "reproduced" if unique else "discrepancy", detail)


def _g2_3_verify(L: Lattice) -> StageResult:
    rep = strong_perfection_report(L)
    detail = {
        "strongly_perfect": rep.is_strongly_perfect,
        "dual_strongly_perfect": rep.is_dual_strongly_perfect,
        "gamma": format_rational(rep.gamma_product),
    }
    ok = rep.is_strongly_perfect and rep.is_dual_strongly_perfect and rep.gamma_product == Fraction(16, 3)
    return _stage("g2-3-verify", "reproduced" if ok else "discrepancy", detail)

# ---------------- 入口 ----------------

def classify14(mode: str = "full", config: Optional[PipelineConfig] = None) -> PipelineReport:
    """按 mode 运行分类流水线; 相同配置与数据给出相同报告。"""
    if mode not in _MODES:
        raise ValueError(f"未知模式 {mode!r}, 可选 {', '.join(_MODES)}")
    config = config or load_config()
    report = PipelineReport(mode=mode)
    add = report.stages.append
    logger.info("classify14 开始: mode=%s", mode)

    if mode in ("general", "full"):
        st, rows = _general_search(config)
        add(st)
        st, survivors = _general_exclusion(rows, config)
        add(st)
        add(_s450_genus_list())
        add(_mass_stage("s450-genus-mass", S450_GENERA))
        add(_s450_enumeration(config))
        add(_level12_genera())
        report.final["general_survivors"] = sorted(_pair(s, r) for s, r in survivors if s != 450) + ["minimal"]
        if mode == "full":
            add(_dual_exclusion(survivors, config))
            add(_theta_stage("general_504", config))

    if mode in ("minimal", "full"):
        add(_minimal_search())
        add(_minimal_cases(config))
        add(_s32_stage())
        st, handoff = _pair_grid()
        add(st)
        report.final["pair_handoff"] = {k: [f"{a},{b}" for a, b in v] for k, v in sorted(handoff.items())}
        for name, count in PAIR_THETA_GENERA.items():
            add(_theta_stage(name, config, expected_count=count))
        st, L = _g2_3(config)
        add(st)
        if L is not None:
            add(_descent_e6(L, len(handoff.get("descent-e6", [])), config))
            add(_g2_3_verify(L))
            report.final.update(lattice="[±G2(3)]_14", det=format_rational(L.det), min=format_rational(L.minimum),
                                kissing=L.kissing_number)
        else:
            add(_stage("descent-e6", "budget-limited", {"note": "缺少 [±G2(3)]_14, 无法比对下降幸存格"}))

    pending = [st.stage for st in report.stages if st.verdict in ("external-data-needed", "budget-limited")]
    report.final["depends_on"] = pending
    report.final["coverage"] = [st.stage for st in report.stages]
    report.final["config"] = config.to_dict()
    report.final["version"] = get_version()
    if mode == "full":
        report.final["unique"] = not pending and not report.has_discrepancy
    logger.info("classify14 结束: %s", report.summary())
    return report

# ---------------- 单格验证 ----------------

def lattice_level(L: Lattice) -> int:
    """使 √N·L* 为偶格的最小 N。"""
    D = L.dual().gram
    n = len(D)
    N = 1
    for i in range(n):
        N = lcm(N, (D[i][i] / 2).denominator)
        for j in range(i):
            N = lcm(N, D[i][j].denominator)
    return N


def verify_lattice(source: Union[str, Path, Lattice], checks: Optional[Iterable[str]] = None,
                   universal_bound=None, expected_dim: Optional[int] = 14,
                   config: Optional[PipelineConfig] = None) -> Tuple[DesignReport, StageResult]:
    """对单个格运行所选检查, 返回设计报告与一个报告片段。"""
    L = source if isinstance(source, Lattice) else Lattice.load(source)
    if expected_dim is not None and L.dim != expected_dim:
        raise ValueError(f"维数 {L.dim} 不在本流水线范围内 (只处理 {expected_dim} 维)")
    wanted: Set[str] = set(checks) if checks is not None else set(VERIFY_CHECKS)
    unknown = wanted - set(VERIFY_CHECKS)
    if unknown:
        raise ValueError(f"未知检查项: {sorted(unknown)}")
    config = config or load_config()
    bound = None
    if "universal" in wanted:
        bound = universal_bound if universal_bound is not None else config.universal_bound_factor * L.dim * L.minimum
    rep = strong_perfection_report(L, universal_bound=bound)
    detail: Dict[str, object] = {}
    failed: List[str] = []
    if "integral" in wanted:
        detail.update(integral=L.is_integral(), even=L.is_even())
        if not L.is_integral():
            failed.append("integral")
    if "min" in wanted:
        detail.update(min=format_rational(L.minimum), dual_min=format_rational(L.dual().minimum))
    if "kissing" in wanted:
        detail["kissing"] = L.kissing_number
    if "design" in wanted:
        detail["strongly_perfect"] = rep.is_strongly_perfect
        if not rep.is_strongly_perfect:
            failed.append("design")
    if "dual_design" in wanted:
        detail["dual_strongly_perfect"] = rep.is_dual_strongly_perfect
        if not rep.is_dual_strongly_perfect:
            failed.append("dual_design")
    if "universal" in wanted:
        detail.update(universal=rep.universal_ok, universal_up_to=format_rational(bound))
        if not rep.universal_ok:
            failed.append("universal")
    if "modular" in wanted and L.is_integral():
        N = lattice_level(L)
        M = fricke_lattice(L, N)
        detail.update(level=N, fricke_min=format_rational(M.minimum),
                      min_matches_fricke=M.minimum == L.minimum)
        if M.minimum != L.minimum:
            failed.append("modular")
    if "n2" in wanted:
        # α 取 L* 的一个最小向量; 对偶格的基即对偶基, 坐标就是 (b_i, α)
        alpha = minimum_and_layer(L.dual())[1].vectors[0]
        cfg = n2_config(L, alpha)
        detail["n2"] = {"applicable": cfg.applicable, "size": len(cfg.members), "c": format_rational(cfg.c),
                        "cardinality_ok": cfg.cardinality_ok, "sum_check": cfg.sum_check}
        if cfg.applicable and rep.is_4design and not (cfg.cardinality_ok and cfg.sum_check):
            failed.append("n2")
    if "antipodal" in wanted:
        ap = antipodal_report(L)
        detail["antipodal"] = ap
        if ap["applicable"] and rep.is_4design and not ap["ok"]:
            failed.append("antipodal")
    detail["gamma"] = format_rational(rep.gamma_product)
    detail["failed"] = failed
    return rep, _stage("verify-lattice", "discrepancy" if failed else "reproduced", detail)
