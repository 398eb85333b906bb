import random
from datetime import datetime, timezone

import pytest

from oced_forge import (
    IncomparableTermsError,
    Iri,
    PlainLiteral,
    Triple,
    TriplePattern,
    TripleStore,
    TypedLiteral,
    Var,
    compare_terms,
    graph_to_triples,
)
from oced_forge.oced_model import OcedEvent, OcedGraph, OcedObject
from oced_forge.terms import EX, EXT, OCEDO, XSD

from oracles import as_bag, nested_loop_bgp

DT = Iri(XSD + "dateTime")


def iri(name):
    return Iri("http://t/" + name)


def t(s, p, o):
    return Triple(iri(s), iri(p), o if not isinstance(o, str) else iri(o))


class TestInsert:
    def test_insert_one(self):
        store = TripleStore()
        store.insert(t("a", "p", "b"))
        assert len(store) == 1

    def test_insert_is_idempotent(self):
        store = TripleStore()
        store.insert(t("a", "p", "b"))
        store.insert(t("a", "p", "b"))
        assert len(store) == 1

    def test_two_distinct(self):
        store = TripleStore([t("a", "p", "b"), t("a", "p", "c")])
        assert len(store) == 2

    def test_frozen_store_rejects_insert(self):
        store = TripleStore([t("a", "p", "b")]).freeze()
        with pytest.raises(RuntimeError, match="frozen"):
            store.insert(t("a", "p", "c"))

    def test_duplicate_insert_never_changes_results(self):
        store = TripleStore([t("a", "p", "b"), t("b", "p", "c")])
        pattern = TriplePattern(Var("s"), iri("p"), Var("o"))
        before = store.match_pattern(pattern)
        store.insert(t("a", "p", "b"))
        assert store.match_pattern(pattern) == before


class TestMatchPattern:
    def test_counting(self):
        store = TripleStore([t("a", "p", "x"), t("b", "p", "y"), t("c", "p", "z"), t("a", "q", "x")])
        assert len(store.match_pattern(TriplePattern(Var("s"), iri("p"), Var("o")))) == 3

    def test_all_constant_membership(self):
        store = TripleStore([t("a", "p", "x")])
        hit = store.match_pattern(TriplePattern(iri("a"), iri("p"), iri("x")))
        miss = store.match_pattern(TriplePattern(iri("a"), iri("p"), iri("y")))
        assert hit == [{}]
        assert miss == []

    def test_repeated_variable_forces_equality(self):
        store = TripleStore([t("a", "p", "a"), t("a", "p", "b")])
        matches = store.match_pattern(TriplePattern(Var("x"), iri("p"), Var("x")))
        assert matches == [{"x": iri("a")}]

    def test_matches_equal_full_scan_for_every_shape(self):
        rng = random.Random(3)
        names = ["a", "b", "c", "d"]
        store = TripleStore()
        triples = []
        for _ in range(40):
            triple = t(rng.choice(names), rng.choice(["p", "q"]), rng.choice(names))
            store.insert(triple)
            if triple not in triples:
                triples.append(triple)
        for s in [Var("s"), iri("a")]:
            for p in [Var("p"), iri("p")]:
                for o in [Var("o"), iri("b"), PlainLiteral("nope")]:
                    pattern = TriplePattern(s, p, o)
                    assert as_bag(store.match_pattern(pattern)) == as_bag(
                        nested_loop_bgp(triples, [pattern])
                    )


class TestMatchBgp:
    def _event_store(self):
        graph = OcedGraph()
        graph.add_object(OcedObject(id="case_1", object_type="case"))
        graph.add_object(OcedObject(id="team_A", object_type="support_team"))
        graph.add_event(
            OcedEvent(
                id="e1",
                event_type="Accepted",
                observed_at=datetime(2012, 1, 1, 9, 0, tzinfo=timezone.utc),
            )
        )
        graph.relate_event_object("e1", "case_1", "event_case")
        graph.relate_event_object("e1", "team_A", "handled_by_support_team")
        return graph_to_triples(graph)

    def test_query_block_on_one_event_fixture(self):
        store = self._event_store()
        event = Var("event")
        patterns = [
            TriplePattern(event, Iri(EXT + "event_case"), Var("case")),
            TriplePattern(event, Iri(OCEDO + "observed_at"), Var("time")),
            TriplePattern(event, Iri(EXT + "handled_by_support_team"), Var("team")),
        ]
        solutions = store.match_bgp(patterns)
        assert as_bag(solutions) == as_bag(nested_loop_bgp(store.triples(), patterns))
        assert len(solutions) == 1
        (sol,) = solutions
        assert sol["event"] == Iri(EX + "e1")
        assert sol["case"] == Iri(EX + "case_1")
        assert sol["team"] == Iri(EX + "team_A")
        assert sol["time"] == TypedLiteral("2012-01-01T09:00:00.000Z", DT)

    def test_disjoint_patterns_multiply(self):
        store = TripleStore([t("a", "p", "x"), t("b", "p", "y"), t("c", "q", "z")])
        patterns = [
            TriplePattern(Var("s1"), iri("p"), Var("o1")),
            TriplePattern(Var("s2"), iri("q"), Var("o2")),
        ]
        assert len(store.match_bgp(patterns)) == 2 * 1

    def test_unsatisfiable_pattern_empties_result(self):
        store = TripleStore([t("a", "p", "x")])
        patterns = [
            TriplePattern(Var("s"), iri("p"), Var("o")),
            TriplePattern(Var("s"), iri("missing"), Var("y")),
        ]
        assert store.match_bgp(patterns) == []

    def test_empty_bgp_yields_single_empty_solution(self):
        assert TripleStore().match_bgp([]) == [{}]

    def test_random_bgps_equal_nested_loop_oracle(self):
        rng = random.Random(17)
        for _ in range(150):
            names = [f"n{i}" for i in range(rng.randint(2, 8))]
            predicates = [f"p{i}" for i in range(rng.randint(1, 3))]
            triples = []
            store = TripleStore()
            for _ in range(rng.randint(1, 60)):
                triple = t(rng.choice(names), rng.choice(predicates), rng.choice(names))
                if triple not in triples:
                    triples.append(triple)
                store.insert(triple)
            variables = [Var(v) for v in "xyz"]

            def position():
                roll = rng.random()
                if roll < 0.45:
                    return rng.choice(variables)
                if roll < 0.85:
                    return iri(rng.choice(names))
                return iri(rng.choice(predicates))

            patterns = [
                TriplePattern(position(), rng.choice([iri(rng.choice(predicates)), rng.choice(variables)]), position())
                for _ in range(rng.randint(1, 4))
            ]
            expected = nested_loop_bgp(triples, patterns, limit=50_000)
            if expected is None:
                continue
            assert as_bag(store.match_bgp(patterns)) == as_bag(expected)


class TestMatchOptional:
    def _store(self):
        return TripleStore(
            [
                t("e1", "event_case", "c1"),
                t("e2", "event_case", "c2"),
                Triple(iri("e1"), iri("classifier"), PlainLiteral("x")),
            ]
        )

    def test_solution_kept_without_optional_binding(self):
        store = self._store()
        solutions = store.match_optional(
            required=[TriplePattern(Var("e"), iri("event_case"), Var("c"))],
            optional_groups=[[TriplePattern(Var("e"), iri("classifier"), Var("k"))]],
        )
        by_event = {sol["e"].value: sol for sol in solutions}
        assert len(solutions) == 2
        assert by_event["http://t/e1"]["k"] == PlainLiteral("x")
        assert "k" not in by_event["http://t/e2"]

    def test_incompatible_optional_keeps_base_solution(self):
        store = self._store()
        solutions = store.match_optional(
            required=[TriplePattern(iri("e2"), iri("event_case"), Var("c"))],
            optional_groups=[[TriplePattern(iri("e2"), iri("classifier"), Var("k"))]],
        )
        assert solutions == [{"c": iri("c2")}]

    def test_multiple_optional_matches_extend_to_multiple_solutions(self):
        store = self._store()
        store.insert(Triple(iri("e1"), iri("classifier"), PlainLiteral("y")))
        solutions = store.match_optional(
            required=[TriplePattern(iri("e1"), iri("event_case"), Var("c"))],
            optional_groups=[[TriplePattern(iri("e1"), iri("classifier"), Var("k"))]],
        )
        assert {sol["k"].value for sol in solutions} == {"x", "y"}


class TestCompareTerms:
    def test_datetime_ordering(self):
        early = TypedLiteral("2012-01-01T10:00:00.000Z", DT)
        late = TypedLiteral("2012-01-01T11:00:00.000Z", DT)
        assert compare_terms(early, late) < 0
        assert compare_terms(late, early) > 0

    def test_same_instant_different_zones_equal(self):
        a = TypedLiteral("2012-01-01T10:00:00.000+01:00", DT)
        b = TypedLiteral("2012-01-01T09:00:00.000Z", DT)
        assert compare_terms(a, b) == 0

    def test_datetime_vs_plain_string_is_a_type_error(self):
        with pytest.raises(IncomparableTermsError):
            compare_terms(TypedLiteral("2012-01-01T10:00:00.000Z", DT), PlainLiteral("x"))

    def test_numeric_comparison_across_numeric_datatypes(self):
        five = TypedLiteral("5", Iri(XSD + "integer"))
        five_and_a_half = TypedLiteral("5.5", Iri(XSD + "double"))
        assert compare_terms(five, five_and_a_half) < 0

    def test_plain_literal_string_order(self):
        assert compare_terms(PlainLiteral("a"), PlainLiteral("b")) < 0

    def test_iri_equality_only(self):
        assert compare_terms(iri("a"), iri("a")) == 0
        with pytest.raises(IncomparableTermsError):
            compare_terms(iri("a"), iri("b"))

    def test_malformed_datetime_is_a_type_error(self):
        with pytest.raises(IncomparableTermsError):
            compare_terms(TypedLiteral("not a date", DT), TypedLiteral("also bad", DT))
