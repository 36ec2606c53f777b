"""Solve or replay a study and render the weight tables."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .hierarchy import CriterionNode, global_weights, rank, rank_within, solve_hierarchy
from .judgments import SpreadPolicy
from .solver import SolverConfig, oracle_lambda
from .study import LocalWeightsFile, StudyFile

ORACLE_GRID = 500
ORACLE_TOL = 5e-3
GLOBAL_NOTE_RAW = "normalized weight = product of local weights along the path (no renormalization)"
GLOBAL_NOTE_RENORM = "normalized weight = product of sibling-renormalized local weights along the path"


@dataclass
class GroupRow:
    id: str
    label: str
    local: float
    rank: int


@dataclass
class GroupTable:
    parent_id: str
    parent_label: str
    lambda_: float | None
    rows: list


@dataclass
class GlobalRow:
    leaf_id: str
    label: str
    group_id: str | None
    local: float
    lambda_group: float | None
    global_: float
    rank: int


@dataclass
class Report:
    groups: list
    global_rows: list
    warnings: list = field(default_factory=list)
    renormalized: bool = False
    mode: str = "solve"
    oracle: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "renormalized": self.renormalized,
            "groups": [
                {"parent": g.parent_id, "label": g.parent_label, "lambda": g.lambda_,
                 "rows": [asdict(r) for r in g.rows]}
                for g in self.groups
            ],
            "global": [
                {"leaf": r.leaf_id, "label": r.label, "group": r.group_id, "local": r.local,
                 "lambda_group": r.lambda_group, "global": r.global_, "rank": r.rank}
                for r in self.global_rows
            ],
            "oracle": self.oracle,
            "warnings": list(self.warnings),
        }


def build_report(root: CriterionNode, local: dict, lambdas: dict, renormalize: bool = False,
                 warnings=(), mode: str = "solve") -> Report:
    globals_ = global_weights(local, root, renormalize=renormalize)
    ranking = rank(globals_, root, local=local, group_lambda=lambdas)
    parent_of = root.parent_of()
    labels = {n.id: n.label for n in root.walk()}

    groups = []
    for parent in root.parents():
        in_group = rank_within(local, parent.child_ids)
        rows = [GroupRow(c.id, c.label, float(local[c.id]), in_group[c.id]) for c in parent.children]
        groups.append(GroupTable(parent.id, parent.label, lambdas.get(parent.id), rows))

    global_rows = []
    for e in ranking.entries:
        gid = parent_of.get(e.leaf_id)
        global_rows.append(GlobalRow(e.leaf_id, labels[e.leaf_id], gid, e.local,
                                     lambdas.get(gid), e.global_, e.rank))
    return Report(groups, global_rows, list(warnings), renormalize, mode)


def run_solve(study: StudyFile, config: SolverConfig | None = None, renormalize: bool = False,
              policy: SpreadPolicy | None = None, oracle_check: bool = False,
              parallel: bool = False) -> Report:
    """Aggregate experts, build matrices, solve every group, compose and rank."""
    config = config or SolverConfig()
    policy = policy or study.policy or SpreadPolicy()
    matrices = study.fuzzy_matrices(policy)
    root = study.hierarchy

    if parallel:
        with ThreadPoolExecutor() as pool:
            local, lambdas = solve_hierarchy(root, matrices, config, executor=pool)
    else:
        local, lambdas = solve_hierarchy(root, matrices, config)

    warnings = []
    for parent in root.parents():
        lam = lambdas[parent.id]
        if len(parent.children) == 1:
            warnings.append(f"group {parent.id}: single child {parent.children[0].id}; "
                            f"local weight set to 1 and lambda to 1")
        elif lam < 0:
            warnings.append(f"group {parent.id}: NEGATIVE lambda {lam:.6f}; "
                            f"fuzzy judgments are strongly inconsistent")
    for pid, rec in study.clipped_records(policy):
        warnings.append(f"group {pid}: crisp {rec.i}/{rec.j} = {rec.crisp:g} lower bound "
                        f"clipped to floor {policy.floor:g}")

    oracle = {}
    if oracle_check:
        for pid, mat in matrices.items():
            if mat.n > 3:
                continue
            value = oracle_lambda(mat, ORACLE_GRID, config.epsilon_w)
            oracle[pid] = value
            if abs(value - lambdas[pid]) > ORACLE_TOL:
                warnings.append(f"group {pid}: oracle lambda {value:.6f} differs from solver "
                                f"{lambdas[pid]:.6f} by more than {ORACLE_TOL:g}")

    report = build_report(root, local, lambdas, renormalize, warnings, mode="solve")
    report.oracle = oracle
    return report


def replay(data: LocalWeightsFile, renormalize: bool = False) -> Report:
    """Report from published local weights, bypassing the solver."""
    root = data.hierarchy
    warnings = []
    for parent in root.parents():
        total = sum(data.local_weights[c.id] for c in parent.children)
        if abs(total - 1.0) > 1e-6:
            warnings.append(f"group {parent.id}: local weights sum to {total:.6f}, not 1")
    return build_report(root, data.local_weights, data.lambdas, renormalize, warnings, mode="replay")


# -- rendering -------------------------------------------------------------

def _fmt(x):
    return "" if x is None else f"{x:.6f}"


def _table(headers, rows):
    widths = [max(len(str(h)), *(len(str(r[k])) for r in rows)) for k, h in enumerate(headers)]
    line = lambda cells: "  ".join(str(c).ljust(w) for c, w in zip(cells, widths)).rstrip()
    return [line(headers), line(["-" * w for w in widths])] + [line(r) for r in rows]


def _render_table(report: Report) -> str:
    out = []
    for g in report.groups:
        title = f"Group {g.parent_id}" + (f" ({g.parent_label})" if g.parent_label else "")
        out.append(f"{title}  lambda = {_fmt(g.lambda_)}")
        out.extend(_table(["code", "label", "weight", "rank"],
                          [[r.id, r.label, _fmt(r.local), r.rank] for r in g.rows]))
        out.append("")
    out.append("Global ranking")
    out.extend(_table(["code", "label", "group", "weight", "normalized weight", "rank"],
                      [[r.leaf_id, r.label, r.group_id or "", _fmt(r.local), _fmt(r.global_), r.rank]
                       for r in report.global_rows]))
    out.append(f"note: {GLOBAL_NOTE_RENORM if report.renormalized else GLOBAL_NOTE_RAW}")
    if report.oracle:
        out.append("")
        out.append("Oracle check (grid)")
        out.extend(f"  {pid}: {val:.6f}" for pid, val in report.oracle.items())
    if report.warnings:
        out.append("")
        out.append("WARNINGS")
        out.extend(f"  ! {w}" for w in report.warnings)
    return "\n".join(out) + "\n"


def _render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["leaf_id", "group_id", "local", "lambda_group", "global", "rank"])
    for r in report.global_rows:
        lam = "" if r.lambda_group is None else repr(float(r.lambda_group))
        writer.writerow([r.leaf_id, r.group_id or "", repr(float(r.local)), lam,
                         repr(float(r.global_)), r.rank])
    return buf.getvalue()


def render(report: Report, format: str = "table") -> bytes:
    """``table`` for people, ``machine`` (JSON, full precision) or ``csv`` (one row per leaf)."""
    if format == "table":
        text = _render_table(report)
    elif format == "machine":
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    elif format == "csv":
        text = _render_csv(report)
    else:
        raise ValueError(f"unknown format {format!r}")
    return text.encode("utf-8")
