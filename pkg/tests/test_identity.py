import io
from collections import defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_record, sha_of
from paydev.errors import OverrideConflictError, SchemaError
from paydev.identity import (
    OverrideRule,
    identity_report,
    merge_identities,
    normalize_name,
    parse_overrides,
)


def records_from_pairs(pairs):
    return [
        make_record(sha=sha_of(i), author_name=name, author_email=email)
        for i, (name, email) in enumerate(pairs)
    ]


def brute_force_components(pairs):
    """Connected components on the alias graph via breadth-first search."""
    adj = defaultdict(set)
    nodes = set()
    for name, email in pairs:
        name = normalize_name(name)
        ns = [("n", name)] if name else []
        es = [("e", email)] if email else []
        for node in ns + es:
            nodes.add(node)
        for a in ns:
            for b in es:
                adj[a].add(b)
                adj[b].add(a)
    seen, comps = set(), []
    for start in nodes:
        if start in seen:
            continue
        comp, queue = set(), [start]
        while queue:
            node = queue.pop()
            if node in comp:
                continue
            comp.add(node)
            queue.extend(adj[node] - comp)
        seen |= comp
        comps.append(comp)
    return comps


class TestMerge:
    def test_shared_name_groups(self):
        pairs = [("Alice", "a@x.com"), ("Alice", "alice@y.org"), ("Bob", "b@x.com")]
        idents = merge_identities(records_from_pairs(pairs))
        assert len(idents) == 2
        by_id = {i.id: i for i in idents}
        assert by_id["a@x.com"].emails == {"a@x.com", "alice@y.org"}
        assert by_id["b@x.com"].names == {"Bob"}

    def test_empty_input(self):
        assert merge_identities([]) == []

    def test_chain_with_split(self):
        pairs = [("N1", "a@x.com"), ("N1", "b@y.org"), ("N2", "b@y.org")]
        rules = [OverrideRule(kind="split", keys=("N2",))]
        idents = merge_identities(records_from_pairs(pairs), rules)
        assert len(idents) == 2
        split = next(i for i in idents if "N2" in i.names)
        assert split.commit_shas == {sha_of(2)}
        other = next(i for i in idents if i is not split)
        assert other.commit_shas == {sha_of(0), sha_of(1)}
        assert other.emails == {"a@x.com", "b@y.org"}

    def test_merge_override_unions(self):
        pairs = [("Alice", "a@x.com"), ("Bob", "b@x.com")]
        rules = [OverrideRule(kind="merge", keys=("a@x.com", "b@x.com"))]
        idents = merge_identities(records_from_pairs(pairs), rules)
        assert len(idents) == 1
        assert idents[0].emails == {"a@x.com", "b@x.com"}

    def test_conflicting_merge_and_split(self):
        rules = [
            OverrideRule(kind="merge", keys=("a@x.com", "b@x.com")),
            OverrideRule(kind="split", keys=("a@x.com",)),
        ]
        with pytest.raises(OverrideConflictError):
            merge_identities(records_from_pairs([("A", "a@x.com")]), rules)

    def test_unobserved_split_key_warns(self, caplog):
        with caplog.at_level("WARNING", logger="paydev.identity"):
            merge_identities(
                records_from_pairs([("A", "a@x.com")]),
                [OverrideRule(kind="split", keys=("ghost@x.com",))],
            )
        assert any("never observed" in r.message for r in caplog.records)

    def test_name_whitespace_normalization(self):
        pairs = [("  Alice   B ", "a@x.com"), ("Alice B", "b@y.org")]
        idents = merge_identities(records_from_pairs(pairs))
        assert len(idents) == 1
        assert idents[0].names == {"Alice B"}

    def test_id_is_smallest_email_then_name(self):
        pairs = [("Zed", "z@z.org"), ("Zed", "a@a.org")]
        idents = merge_identities(records_from_pairs(pairs))
        assert idents[0].id == "a@a.org"
        only_name = merge_identities([make_record(author_name="Solo", author_email="")])
        assert only_name[0].id == "Solo"

    def test_empty_strings_do_not_link(self):
        pairs = [("A", ""), ("B", "")]
        idents = merge_identities(records_from_pairs(pairs))
        assert len(idents) == 2


@st.composite
def alias_pairs(draw):
    names = [f"N{i}" for i in range(6)]
    emails = [f"e{i}@x" for i in range(6)]
    n = draw(st.integers(min_value=0, max_value=25))
    return [
        (draw(st.sampled_from(names)), draw(st.sampled_from(emails))) for _ in range(n)
    ]


class TestProperties:
    @given(alias_pairs())
    @settings(max_examples=200, deadline=None)
    def test_partition_and_oracle(self, pairs):
        records = records_from_pairs(pairs)
        idents = merge_identities(records)
        # partition: every commit in exactly one identity
        all_shas = [sha for i in idents for sha in i.commit_shas]
        assert sorted(all_shas) == sorted(r.sha for r in records)
        # key sets equal brute-force connected components
        got = {frozenset(("n",) + (n,) for n in i.names) | frozenset(("e", e) for e in i.emails)
               for i in idents}
        expected = set()
        for comp in brute_force_components(pairs):
            expected.add(frozenset((k, v) for k, v in comp))
        assert {frozenset(c) for c in got} == expected

    @given(alias_pairs())
    @settings(max_examples=100, deadline=None)
    def test_idempotent(self, pairs):
        idents = merge_identities(records_from_pairs(pairs))
        again_records = []
        counter = 0
        for ident in idents:
            name = min(ident.names) if ident.names else ""
            email = ident.id if "@" in ident.id else ""
            for _ in ident.commit_shas:
                again_records.append(
                    make_record(sha=sha_of(1000 + counter), author_name=name,
                                author_email=email)
                )
                counter += 1
        again = merge_identities(again_records)
        assert sorted(len(i.commit_shas) for i in again) == sorted(
            len(i.commit_shas) for i in idents
        )
        assert len(again) == len(idents)


class TestReport:
    def test_sorted_by_count_then_id(self):
        pairs = [("A", "a@x"), ("B", "b@x"), ("B", "b@x"), ("C", "c@x"), ("C", "c@x")]
        idents = merge_identities(records_from_pairs(pairs))
        rows = identity_report(idents)
        assert [r[0] for r in rows] == ["b@x", "c@x", "a@x"]
        assert [r[2] for r in rows] == [2, 2, 1]

    def test_empty(self):
        assert identity_report([]) == []


class TestOverridesFile:
    def test_parse(self):
        text = "# comment\nmerge a@x|b@y\nsplit N2\n\n"
        rules = parse_overrides(io.StringIO(text))
        assert rules == [
            OverrideRule(kind="merge", keys=("a@x", "b@y")),
            OverrideRule(kind="split", keys=("N2",)),
        ]

    def test_bad_kind(self):
        with pytest.raises(SchemaError):
            parse_overrides(io.StringIO("link a|b\n"))
