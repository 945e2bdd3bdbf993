"""Merge author aliases into developer identities.

Grouping is transitive over shared names or shared emails: the alias graph
has one node per distinct name and per distinct email and one edge per
observed (name, email) pair; connected components are identities. Manual
override rules adjust the automatic result — splits are applied first and
take the listed keys (with their commits) out of the graph, merges union
components afterwards.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from paydev.errors import OverrideConflictError, SchemaError

log = logging.getLogger(__name__)

_WS_RUN = re.compile(r"\s+")


def normalize_name(name: str) -> str:
    """Trim surrounding whitespace and collapse internal runs to one space."""
    return _WS_RUN.sub(" ", name.strip())


@dataclass
class Identity:
    """A merged developer: alias sets plus the commits they own."""

    id: str
    names: set[str] = field(default_factory=set)
    emails: set[str] = field(default_factory=set)
    commit_shas: set[str] = field(default_factory=set)


@dataclass(frozen=True)
class OverrideRule:
    kind: str  # "merge" or "split"
    keys: tuple[str, ...]


def parse_overrides(fileobj) -> list[OverrideRule]:
    """Read override rules: `merge key1|key2|...` or `split key1|...`."""
    rules = []
    for lineno, line in enumerate(fileobj, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        kind, _, rest = line.partition(" ")
        if kind not in ("merge", "split"):
            raise SchemaError(f"unknown override kind {kind!r}", line=lineno)
        keys = tuple(k.strip() for k in rest.split("|") if k.strip())
        if not keys:
            raise SchemaError("override rule needs at least one key", line=lineno)
        rules.append(OverrideRule(kind=kind, keys=keys))
    return rules


class _DSU:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        root = x
        while self.parent.setdefault(root, root) != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _identity_id(names, emails, commit_shas) -> str:
    if emails:
        return min(emails)
    if names:
        return min(names)
    return min(commit_shas)


def merge_identities(records, overrides=()) -> list[Identity]:
    """Partition commits into identities; see the module docstring.

    Result is sorted by identity id. Split keys never observed in the data
    produce a warning, a key in both a merge and a split rule is an error.
    """
    merge_keys = {k for r in overrides if r.kind == "merge" for k in r.keys}
    split_rules = [r for r in overrides if r.kind == "split"]
    split_keys = {k for r in split_rules for k in r.keys}
    conflict = merge_keys & split_keys
    if conflict:
        raise OverrideConflictError(
            f"key {sorted(conflict)[0]!r} appears in both merge and split rules"
        )

    # Splits first: a commit matching any split key (by normalized name or
    # email) belongs to that rule's identity; first matching rule wins.
    split_of = {}
    for i, rule in enumerate(split_rules):
        for key in rule.keys:
            split_of.setdefault(key, i)
    split_identities = [
        Identity(id="", names=set(), emails=set(), commit_shas=set()) for _ in split_rules
    ]
    seen_keys = set()

    dsu = _DSU()
    grouped = []  # (nodes, record) kept out of splits
    orphans = []  # records with neither a name nor an email
    for rec in records:
        name = normalize_name(rec.author_name)
        email = rec.author_email
        seen_keys.update((name, email))
        rule_idx = split_of.get(name, split_of.get(email))
        if rule_idx is not None:
            ident = split_identities[rule_idx]
            if name:
                ident.names.add(name)
            if email:
                ident.emails.add(email)
            ident.commit_shas.add(rec.sha)
            continue
        # Empty strings must not become linking nodes.
        nodes = []
        if name:
            nodes.append(("n", name))
        if email:
            nodes.append(("e", email))
        if not nodes:
            orphans.append(rec)
            continue
        if len(nodes) == 2:
            dsu.union(nodes[0], nodes[1])
        else:
            dsu.find(nodes[0])
        grouped.append((nodes, rec))

    for key in sorted(split_keys - seen_keys):
        log.warning("split override key %r was never observed", key)

    # Merge overrides union the components containing each listed key.
    for rule in overrides:
        if rule.kind != "merge":
            continue
        anchor = None
        for key in rule.keys:
            for node in (("n", normalize_name(key)), ("e", key)):
                if node in dsu.parent:
                    if anchor is None:
                        anchor = node
                    else:
                        dsu.union(anchor, node)

    components: dict = {}
    for nodes, rec in grouped:
        root = dsu.find(nodes[0])
        ident = components.get(root)
        if ident is None:
            ident = components[root] = Identity(id="")
        for kind, value in nodes:
            (ident.names if kind == "n" else ident.emails).add(value)
        ident.commit_shas.add(rec.sha)

    result = list(components.values())
    result.extend(i for i in split_identities if i.commit_shas)
    result.extend(Identity(id="", commit_shas={rec.sha}) for rec in orphans)
    for ident in result:
        ident.id = _identity_id(ident.names, ident.emails, ident.commit_shas)
    result.sort(key=lambda i: i.id)
    return result


def identity_report(identities) -> list[tuple[str, int, int]]:
    """Rows of (id, alias count, commit count), most commits first."""
    rows = [
        (ident.id, len(ident.names) + len(ident.emails), len(ident.commit_shas))
        for ident in identities
    ]
    rows.sort(key=lambda r: (-r[2], r[0]))
    return rows
