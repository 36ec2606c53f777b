"""Study files: hierarchy plus per-group judgments, in YAML (JSON is accepted too).

Schema::

    scale:            # optional, replaces the default linguistic scale
      very low: [1, 2, 3]
    policy:           # optional, used by crisp records
      spread: 1.0
      floor: 0.1111
    hierarchy:
      id: GOAL
      label: Overall goal
      children:
        - {id: C1, label: First}
        - {id: C2, label: Second}
    matrices:         # parent id -> judgment records, one kind per matrix
      GOAL:
        - {i: C1, j: C2, label: low}          # linguistic
        - {i: C1, j: C2, l: 2, m: 3, u: 4}    # explicit band
        - {i: C1, j: C2, crisp: 3.0}          # crisp ratio, widened by policy
    experts:          # alternative to `matrices`: one matrix set per expert
      - {GOAL: [...]}

A record ``{i: A, j: B, ...}`` is a judgment on ``w_A / w_B``.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from .fuzzy_core import FuzzyNumberError, LinguisticScale, TriangularFuzzyNumber
from .hierarchy import CriterionNode
from .judgments import (
    FuzzyComparisonMatrix,
    JudgmentError,
    SpreadPolicy,
    aggregate_experts,
    build_matrix,
)

KINDS = ("label", "explicit", "crisp")
TOP_KEYS = {"name", "description", "scale", "policy", "hierarchy", "matrices", "experts"}
LOCALWEIGHT_KEYS = {"name", "description", "hierarchy", "local_weights", "lambdas"}
DATASETS = ("paper_study", "paper_localweights", "toy_two_items", "contradictory",
            "floor_clip", "singleton", "experts")


@dataclass(frozen=True)
class Issue:
    path: str
    message: str
    line: int | None = None
    kind: str = "syntax"

    def __str__(self):
        where = f"line {self.line}: " if self.line else ""
        return f"{where}{self.path or '<root>'}: {self.message}"


class StudyError(ValueError):
    """Invalid study file; ``issues`` lists every problem found."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("\n".join(str(i) for i in self.issues))


class StudySyntaxError(StudyError):
    pass


class StudyReferenceError(StudyError):
    pass


class MixedJudgmentKinds(StudyError):
    pass


_ERROR_FOR_KIND = {"syntax": StudySyntaxError, "reference": StudyReferenceError,
                   "mixed": MixedJudgmentKinds}


@dataclass(frozen=True)
class JudgmentRecord:
    i: str
    j: str
    kind: str
    label: str | None = None
    band: tuple | None = None
    crisp: float | None = None

    def to_dict(self):
        out: dict[str, Any] = {"i": self.i, "j": self.j}
        if self.kind == "label":
            out["label"] = self.label
        elif self.kind == "explicit":
            out.update(zip("lmu", self.band))
        else:
            out["crisp"] = self.crisp
        return out


@dataclass
class StudyFile:
    hierarchy: CriterionNode
    matrices: dict = field(default_factory=dict)
    scale: LinguisticScale | None = None
    policy: SpreadPolicy | None = None
    experts: list | None = None
    name: str | None = None

    def judgment_sets(self) -> list:
        """Per-expert ``{parent: [records]}``; a single set when no experts are given."""
        return self.experts if self.experts is not None else [self.matrices]

    def fuzzy_matrices(self, policy: SpreadPolicy | None = None) -> dict:
        """Build (and aggregate across experts) one fuzzy matrix per group."""
        scale = self.scale or LinguisticScale.default()
        policy = policy or self.policy or SpreadPolicy()
        sets = self.judgment_sets()
        out = {}
        for parent in self.hierarchy.parents():
            if len(parent.children) < 2:
                continue
            per_expert = [_records_to_matrix(parent, s[parent.id], scale, policy)
                          for s in sets if parent.id in s]
            if per_expert:
                out[parent.id] = aggregate_experts(per_expert)
        return out

    def clipped_records(self, policy: SpreadPolicy | None = None) -> list:
        """``(parent, record)`` for crisp records whose lower bound is raised to the floor."""
        policy = policy or self.policy or SpreadPolicy()
        return [(pid, r) for s in self.judgment_sets() for pid, recs in s.items()
                for r in recs if r.kind == "crisp" and policy.clips(r.crisp)]

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        if self.name is not None:
            out["name"] = self.name
        if self.scale is not None:
            out["scale"] = {k: list(v) for k, v in self.scale.items()}
        if self.policy is not None:
            out["policy"] = {"spread": self.policy.spread, "floor": self.policy.floor}
        out["hierarchy"] = _node_to_dict(self.hierarchy)
        if self.experts is not None:
            out["experts"] = [_set_to_dict(s) for s in self.experts]
        else:
            out["matrices"] = _set_to_dict(self.matrices)
        return out


@dataclass
class LocalWeightsFile:
    """Published local weights to replay through the global composition."""

    hierarchy: CriterionNode
    local_weights: dict
    lambdas: dict = field(default_factory=dict)
    name: str | None = None


def _records_to_matrix(parent, records, scale, policy) -> FuzzyComparisonMatrix:
    entries = []
    for r in records:
        if r.kind == "label":
            t = scale[r.label]
        elif r.kind == "explicit":
            t = TriangularFuzzyNumber(*r.band)
        else:
            t = policy.widen(r.crisp)
        entries.append((r.i, r.j, t))
    return build_matrix(parent.child_ids, entries)


def _node_to_dict(node: CriterionNode) -> dict:
    out: dict[str, Any] = {"id": node.id, "label": node.label}
    if node.children:
        out["children"] = [_node_to_dict(c) for c in node.children]
    return out


def _set_to_dict(judgment_set: dict) -> dict:
    return {pid: [r.to_dict() for r in recs] for pid, recs in judgment_set.items()}


# -- parsing ---------------------------------------------------------------

def _line_map(text: str) -> dict:
    """Map dotted field paths to 1-based source lines."""
    lines = {}

    def walk(node, path):
        lines.setdefault(path, node.start_mark.line + 1)
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                key = str(k.value)
                sub = f"{path}.{key}" if path else key
                lines[sub] = k.start_mark.line + 1
                walk(v, sub)
        elif isinstance(node, yaml.SequenceNode):
            for idx, v in enumerate(node.value):
                walk(v, f"{path}[{idx}]")

    root = yaml.compose(text, Loader=yaml.SafeLoader)
    if root is not None:
        walk(root, "")
    return lines


class _Collector:
    def __init__(self, lines):
        self.lines = lines
        self.issues = []

    def add(self, path, message, kind="syntax"):
        line = self.lines.get(path)
        probe = path
        while line is None and probe:
            probe = probe.rsplit(".", 1)[0] if "." in probe else probe.rsplit("[", 1)[0] if "[" in probe else ""
            line = self.lines.get(probe)
        self.issues.append(Issue(path, message, line, kind))

    def raise_if_any(self):
        if self.issues:
            raise _ERROR_FOR_KIND[self.issues[0].kind](self.issues)


def _load(data) -> tuple:
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    try:
        lines = _line_map(data)
        doc = yaml.safe_load(data)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise StudySyntaxError([Issue("", f"not valid YAML/JSON: {getattr(exc, 'problem', exc)}", line)]) from None
    if not isinstance(doc, dict):
        raise StudySyntaxError([Issue("", "top level must be a mapping", 1)])
    return doc, _Collector(lines)


def _number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _parse_node(obj, path, col, seen) -> CriterionNode | None:
    if not isinstance(obj, dict):
        col.add(path, "node must be a mapping with id, label, children")
        return None
    unknown = set(obj) - {"id", "label", "children"}
    if unknown:
        col.add(path, f"unknown node fields {sorted(unknown)}")
    nid = obj.get("id")
    if not isinstance(nid, (str, int)) or isinstance(nid, bool):
        col.add(f"{path}.id", "node id must be a string")
        return None
    nid = str(nid)
    if nid in seen:
        col.add(f"{path}.id", f"duplicate node id {nid!r}")
    seen.add(nid)
    label = obj.get("label", "")
    children_raw = obj.get("children", []) or []
    if not isinstance(children_raw, list):
        col.add(f"{path}.children", "children must be a list")
        children_raw = []
    children = [_parse_node(c, f"{path}.children[{k}]", col, seen) for k, c in enumerate(children_raw)]
    if any(c is None for c in children):
        return None
    return CriterionNode(nid, "" if label is None else str(label), tuple(children))


def _parse_hierarchy(doc, col) -> CriterionNode | None:
    if "hierarchy" not in doc:
        col.add("hierarchy", "missing required field")
        return None
    return _parse_node(doc["hierarchy"], "hierarchy", col, set())


def _parse_record(obj, path, parent, col) -> JudgmentRecord | None:
    if not isinstance(obj, dict):
        col.add(path, "judgment record must be a mapping")
        return None
    ok = True
    for key in ("i", "j"):
        if key not in obj:
            col.add(f"{path}.{key}", "missing required field")
            ok = False
        elif str(obj[key]) not in parent.child_ids:
            col.add(f"{path}.{key}", f"unknown id {obj[key]!r} (not a child of {parent.id!r})", "reference")
            ok = False
    present = [k for k, keys in (("label", {"label"}), ("explicit", {"l", "m", "u"}), ("crisp", {"crisp"}))
               if keys & set(obj)]
    unknown = set(obj) - {"i", "j", "label", "l", "m", "u", "crisp"}
    if unknown:
        col.add(path, f"unknown judgment fields {sorted(unknown)}")
        ok = False
    if len(present) != 1:
        col.add(path, "record needs exactly one of: label | l, m, u | crisp")
        return None
    if not ok:
        return None
    kind = present[0]
    i, j = str(obj["i"]), str(obj["j"])
    if kind == "label":
        if not isinstance(obj["label"], str):
            col.add(f"{path}.label", "label must be text")
            return None
        return JudgmentRecord(i, j, "label", label=obj["label"])
    if kind == "explicit":
        if not all(k in obj and _number(obj[k]) for k in "lmu"):
            col.add(path, "explicit record needs numeric l, m and u")
            return None
        return JudgmentRecord(i, j, "explicit", band=tuple(float(obj[k]) for k in "lmu"))
    if not _number(obj["crisp"]) or obj["crisp"] <= 0:
        col.add(f"{path}.crisp", "crisp value must be a positive number")
        return None
    return JudgmentRecord(i, j, "crisp", crisp=float(obj["crisp"]))


def _parse_judgment_set(obj, path, root, col) -> dict:
    if not isinstance(obj, dict):
        col.add(path, "must map group ids to judgment lists")
        return {}
    parents = {n.id: n for n in root.walk()}
    out = {}
    for pid, recs in obj.items():
        pid_s = str(pid)
        sub = f"{path}.{pid_s}"
        if pid_s not in parents:
            col.add(sub, f"unknown group id {pid_s!r}", "reference")
            continue
        parent = parents[pid_s]
        if len(parent.children) < 2:
            col.add(sub, f"group {pid_s!r} has fewer than two children; nothing to compare", "reference")
            continue
        if not isinstance(recs, list):
            col.add(sub, "judgments must be a list")
            continue
        records = [_parse_record(r, f"{sub}[{k}]", parent, col) for k, r in enumerate(recs)]
        records = [r for r in records if r is not None]
        kinds = {r.kind for r in records}
        if len(kinds) > 1:
            col.add(sub, f"judgment kinds may not be mixed within one matrix (found {sorted(kinds)})", "mixed")
            continue
        out[pid_s] = records
    return out


def _parse_scale(obj, col) -> LinguisticScale | None:
    if not isinstance(obj, dict):
        col.add("scale", "scale must map labels to [l, m, u]")
        return None
    items = []
    for label, band in obj.items():
        if not (isinstance(band, list) and len(band) == 3 and all(_number(x) for x in band)):
            col.add(f"scale.{label}", "band must be a list [l, m, u]")
            return None
        items.append((str(label), tuple(float(x) for x in band)))
    try:
        return LinguisticScale(items)
    except (ValueError, FuzzyNumberError) as exc:
        col.add("scale", str(exc))
        return None


def _parse_policy(obj, col) -> SpreadPolicy | None:
    if not isinstance(obj, dict) or set(obj) - {"spread", "floor"}:
        col.add("policy", "policy must be a mapping with spread and/or floor")
        return None
    try:
        return SpreadPolicy(**{k: float(v) for k, v in obj.items()})
    except (TypeError, ValueError) as exc:
        col.add("policy", str(exc))
        return None


def parse_study(data) -> StudyFile:
    """Parse and fully validate a study file given as text or bytes.

    Raises a :class:`StudyError` subclass listing every problem with its
    field path and source line.
    """
    doc, col = _load(data)
    unknown = set(doc) - TOP_KEYS
    if unknown:
        col.add("", f"unknown top-level fields {sorted(unknown)}")
    root = _parse_hierarchy(doc, col)
    scale = _parse_scale(doc["scale"], col) if doc.get("scale") is not None else None
    policy = _parse_policy(doc["policy"], col) if doc.get("policy") is not None else None
    if root is None:
        col.raise_if_any()

    matrices, experts = {}, None
    if "matrices" in doc and "experts" in doc:
        col.add("experts", "give either matrices or experts, not both")
    elif "experts" in doc:
        if not isinstance(doc["experts"], list) or not doc["experts"]:
            col.add("experts", "experts must be a non-empty list of matrix sets")
        else:
            experts = [_parse_judgment_set(e, f"experts[{k}]", root, col) for k, e in enumerate(doc["experts"])]
    elif "matrices" in doc:
        matrices = _parse_judgment_set(doc["matrices"], "matrices", root, col)
    col.raise_if_any()

    study = StudyFile(hierarchy=root, matrices=matrices, scale=scale, policy=policy,
                      experts=experts, name=doc.get("name"))
    _check_matrices(study, col)
    col.raise_if_any()
    return study


def _check_matrices(study: StudyFile, col: _Collector):
    scale = study.scale or LinguisticScale.default()
    policy = study.policy or SpreadPolicy()
    for k, jset in enumerate(study.judgment_sets()):
        base = "matrices" if study.experts is None else f"experts[{k}]"
        for parent in study.hierarchy.parents():
            if len(parent.children) < 2:
                continue
            path = f"{base}.{parent.id}"
            if parent.id not in jset:
                if study.experts is None or not any(parent.id in s for s in study.experts):
                    col.add(path, f"no judgments for group {parent.id!r}", "reference")
                continue
            try:
                _records_to_matrix(parent, jset[parent.id], scale, policy)
            except KeyError as exc:
                col.add(path, str(exc.args[0]), "reference")
            except (JudgmentError, FuzzyNumberError, ValueError) as exc:
                col.add(path, str(exc))
    if study.experts is not None:
        for parent in study.hierarchy.parents():
            have = [s for s in study.experts if parent.id in s]
            if len(parent.children) >= 2 and have and len(have) != len(study.experts):
                col.add("experts", f"group {parent.id!r} is judged by only {len(have)} of "
                                   f"{len(study.experts)} experts")


def parse_localweights(data) -> LocalWeightsFile:
    doc, col = _load(data)
    unknown = set(doc) - LOCALWEIGHT_KEYS
    if unknown:
        col.add("", f"unknown top-level fields {sorted(unknown)}")
    root = _parse_hierarchy(doc, col)
    col.raise_if_any()
    ids = {n.id for n in root.walk()}
    weights, lambdas = {}, {}
    for key, target in (("local_weights", weights), ("lambdas", lambdas)):
        obj = doc.get(key, {}) or {}
        if not isinstance(obj, dict):
            col.add(key, "must map node ids to numbers")
            continue
        for nid, val in obj.items():
            if str(nid) not in ids:
                col.add(f"{key}.{nid}", f"unknown id {nid!r}", "reference")
            elif not _number(val):
                col.add(f"{key}.{nid}", "value must be a number")
            else:
                target[str(nid)] = float(val)
    for node in root.walk():
        if node is not root and node.id not in weights:
            col.add("local_weights", f"no local weight for {node.id!r}", "reference")
    col.raise_if_any()
    return LocalWeightsFile(root, weights, lambdas, doc.get("name"))


class _Dumper(yaml.SafeDumper):
    pass


def _represent_str(dumper, value):
    # YAML folds unicode line breaks in plain scalars; double quotes escape them
    style = '"' if any(c in value for c in "\x85\u2028\u2029") or not value.isprintable() else None
    return dumper.represent_scalar("tag:yaml.org,2002:str", value, style=style)


_Dumper.add_representer(str, _represent_str)


def dump_study(study: StudyFile) -> bytes:
    """Serialise a study to YAML that :func:`parse_study` reads back unchanged."""
    buf = io.StringIO()
    yaml.dump(study.to_dict(), buf, Dumper=_Dumper, sort_keys=False, allow_unicode=True,
              default_flow_style=None)
    return buf.getvalue().encode("utf-8")


# -- bundled data ----------------------------------------------------------

def dataset_path(name: str) -> Path:
    if name not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; bundled: {', '.join(DATASETS)}")
    return Path(str(resources.files("fuzzyprio") / "data" / f"{name}.yaml"))


def read_source(ref: str) -> bytes:
    """Bytes of a study given as a file path or a bundled dataset name."""
    path = Path(ref)
    if path.exists():
        return path.read_bytes()
    if ref in DATASETS:
        return dataset_path(ref).read_bytes()
    raise FileNotFoundError(f"{ref}: no such file or bundled dataset")


def load_dataset(name: str):
    data = dataset_path(name).read_bytes()
    if name == "paper_localweights":
        return parse_localweights(data)
    return parse_study(data)
