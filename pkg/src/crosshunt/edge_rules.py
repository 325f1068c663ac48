"""Semantic equivalence rules between edge labels.

Two edges are similar when their suspiciousness labels agree AND either their
syscall labels are identical or a rule row declares the label pair equivalent,
subject to that row's predicates over the edges' endpoint labels. Rules are
data: a table of `<labelA> <labelB> [<predicate> <args...>]...` lines that an
analyst can replace at runtime. All label comparisons are case-insensitive.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .graph_model import Edge, NodeKind, TaggedProvenanceGraph

DEFAULT_SHARED_OBJECT_SUFFIXES = (".dll", ".so", ".dylib")
DEFAULT_SCRIPT_SUFFIXES = (".ps1", ".psd1", ".psm1")


@dataclass(frozen=True)
class EdgeContext:
    """One edge plus the endpoint labels its predicates may inspect."""

    syscall_label: str
    suspiciousness_label: str
    subject_label: str
    object_label: str


def edge_context(graph: TaggedProvenanceGraph, edge: Edge) -> EdgeContext:
    """Resolve an edge's subject/object labels from its endpoints.

    The subject is the unique Subject-kind endpoint when there is one;
    for same-kind endpoints (e.g. process->process fork) src acts as subject.
    """
    src = graph.nodes[edge.src]
    dst = graph.nodes[edge.dst]
    if dst.kind is NodeKind.SUBJECT and src.kind is not NodeKind.SUBJECT:
        subject, obj = dst, src
    else:
        subject, obj = src, dst
    return EdgeContext(
        syscall_label=edge.syscall_label,
        suspiciousness_label=edge.suspiciousness_label,
        subject_label=subject.label,
        object_label=obj.label,
    )


# -- predicates ---------------------------------------------------------------

Predicate = Callable[[EdgeContext, EdgeContext, tuple[str, ...]], bool]


def _subj_contains(ctx: EdgeContext, needles: tuple[str, ...]) -> bool:
    hay = ctx.subject_label.lower()
    return any(n in hay for n in needles)


def _obj_suffix(ctx: EdgeContext, suffixes: tuple[str, ...]) -> bool:
    obj = ctx.object_label.lower()
    return any(obj.endswith(s) for s in suffixes)


def _p_subj_contains_both(a: EdgeContext, b: EdgeContext, args: tuple[str, ...]) -> bool:
    return _subj_contains(a, args) and _subj_contains(b, args)


def _p_subj_contains_either(a: EdgeContext, b: EdgeContext, args: tuple[str, ...]) -> bool:
    return _subj_contains(a, args) or _subj_contains(b, args)


def _p_obj_suffix_both(a: EdgeContext, b: EdgeContext, args: tuple[str, ...]) -> bool:
    return _obj_suffix(a, args) and _obj_suffix(b, args)


def _p_obj_suffix_either(a: EdgeContext, b: EdgeContext, args: tuple[str, ...]) -> bool:
    return _obj_suffix(a, args) or _obj_suffix(b, args)


def _p_susp_equals(a: EdgeContext, b: EdgeContext, args: tuple[str, ...]) -> bool:
    want = {x.lower() for x in args}
    return (
        a.suspiciousness_label.lower() in want
        and b.suspiciousness_label.lower() in want
    )


def _p_susp_not_equals(a: EdgeContext, b: EdgeContext, args: tuple[str, ...]) -> bool:
    avoid = {x.lower() for x in args}
    return (
        a.suspiciousness_label.lower() not in avoid
        and b.suspiciousness_label.lower() not in avoid
    )


PREDICATES: dict[str, Predicate] = {
    "subj_contains_both": _p_subj_contains_both,
    "subj_contains_either": _p_subj_contains_either,
    "obj_suffix_both": _p_obj_suffix_both,
    "obj_suffix_either": _p_obj_suffix_either,
    "susp_equals": _p_susp_equals,
    "susp_not_equals": _p_susp_not_equals,
}


# -- rule table ---------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    label_a: str
    label_b: str
    predicates: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def applies(self, a: EdgeContext, b: EdgeContext) -> bool:
        return all(PREDICATES[name](a, b, args) for name, args in self.predicates)


class RuleSet:
    """Indexed rule table; the identity row is built in."""

    def __init__(self, rules: Iterable[Rule]):
        self.rules = tuple(rules)
        self._by_pair: dict[frozenset[str], list[Rule]] = {}
        for rule in self.rules:
            key = frozenset((rule.label_a, rule.label_b))
            self._by_pair.setdefault(key, []).append(rule)

    def matching(self, label_a: str, label_b: str) -> list[Rule]:
        return self._by_pair.get(frozenset((label_a, label_b)), [])

    @classmethod
    def parse(cls, text: str) -> "RuleSet":
        rules: list[Rule] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.lower().split()
            if len(tokens) < 2:
                raise ValueError(f"rule line {lineno}: need two labels")
            label_a, label_b = tokens[0], tokens[1]
            groups: list[tuple[str, list[str]]] = []
            for token in tokens[2:]:
                if token in PREDICATES:
                    groups.append((token, []))
                elif groups:
                    groups[-1][1].append(token)
                else:
                    raise ValueError(
                        f"rule line {lineno}: {token!r} is not a predicate name"
                    )
            predicates = []
            for name, args in groups:
                if not args:
                    raise ValueError(
                        f"rule line {lineno}: predicate {name} needs arguments"
                    )
                predicates.append((name, tuple(args)))
            rules.append(Rule(label_a, label_b, tuple(predicates)))
        return cls(rules)

    @classmethod
    def load(cls, path: str | Path) -> "RuleSet":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(
        cls,
        shared_object_suffixes: tuple[str, ...] = DEFAULT_SHARED_OBJECT_SUFFIXES,
        row5_disjunctive: bool = False,
        row5_no_initial_compromise: bool = False,
    ) -> "RuleSet":
        return cls.parse(
            default_rules_text(
                shared_object_suffixes, row5_disjunctive, row5_no_initial_compromise
            )
        )


def default_rules_text(
    shared_object_suffixes: tuple[str, ...] = DEFAULT_SHARED_OBJECT_SUFFIXES,
    row5_disjunctive: bool = False,
    row5_no_initial_compromise: bool = False,
) -> str:
    """The built-in rule table, rendered in the on-disk rule format."""
    subj_pred = "subj_contains_either" if row5_disjunctive else "subj_contains_both"
    obj_pred = "obj_suffix_either" if row5_disjunctive else "obj_suffix_both"
    script_row = (
        f"read exec {subj_pred} powershell {obj_pred} "
        + " ".join(DEFAULT_SCRIPT_SUFFIXES)
    )
    if row5_no_initial_compromise:
        script_row += " susp_not_equals initial_compromise"
    lines = [
        "# <labelA> <labelB> [<predicate> <args...>]...  ('#' starts a comment)",
        "load exec",
        "fork exec",
        "write create",
        script_row,
        "taskstart processcreate susp_equals untrusted_exec",
        "read load obj_suffix_both " + " ".join(shared_object_suffixes),
    ]
    return "\n".join(lines) + "\n"


def edges_similar(a: EdgeContext, b: EdgeContext, rules: RuleSet) -> bool:
    """Total, symmetric, reflexive similarity test between two edges."""
    if a.suspiciousness_label.lower() != b.suspiciousness_label.lower():
        return False
    sys_a = a.syscall_label.lower()
    sys_b = b.syscall_label.lower()
    if sys_a == sys_b:
        return True
    for rule in rules.matching(sys_a, sys_b):
        if rule.applies(a, b):
            return True
    return False
