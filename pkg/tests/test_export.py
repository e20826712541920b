import json
import random

import pytest

from probtree import (
    CategoricalTable,
    InvariantViolationError,
    ParseError,
    VersionMismatchError,
    build_tree,
    connected_components,
    from_json,
    load_document,
    node_count,
    print_tree,
    to_dot,
    to_json,
)

from .conftest import random_table
from .dot_check import component_count, parse_dot


# -- JSON round trip -----------------------------------------------------------

def test_round_trip_micro(micro_tree):
    again = from_json(to_json(micro_tree))
    assert again == micro_tree
    assert print_tree(again) == print_tree(micro_tree)

def test_round_trip_random_trees():
    rng = random.Random(7)
    for _ in range(20):
        tree = build_tree(random_table(rng))
        assert from_json(to_json(tree)) == tree

def test_round_trip_text_values():
    tree = build_tree(CategoricalTable(("A", "B"), [("x,|", 'q"q'), ("y", "r")]))
    assert from_json(to_json(tree)) == tree

def test_metadata_survives(micro_tree):
    doc = load_document(to_json(micro_tree, metadata={"source_rows": 3, "note": "n"}))
    assert doc.metadata == {"source_rows": 3, "note": "n"}
    assert doc.format_version == 1

def test_probabilities_identical_after_round_trip(survey_tree):
    again = from_json(to_json(survey_tree))
    for a, b in zip(again.root.data, survey_tree.root.data):
        assert a.probability == b.probability  # exact, not approx


# -- document validation ---------------------------------------------------------

def doc_with(prob_a, prob_b, version=1):
    return json.dumps({
        "format_version": version,
        "columns": ["A"],
        "metadata": {},
        "root": {"column": "A", "data": [
            {"value": 1, "probability": prob_a},
            {"value": 2, "probability": prob_b},
        ]},
    })

def test_bad_normalization_rejected():
    with pytest.raises(InvariantViolationError):
        from_json(doc_with(0.5, 0.3))

def test_unknown_version_rejected():
    with pytest.raises(VersionMismatchError):
        from_json(doc_with(0.5, 0.5, version=2))

def test_invalid_json_rejected():
    with pytest.raises(ParseError):
        from_json("{not json")

def test_non_object_rejected():
    with pytest.raises(ParseError):
        from_json("[1, 2]")

def test_missing_version_rejected():
    with pytest.raises(ParseError):
        from_json('{"columns": ["A"], "root": {}}')

def test_unsorted_probabilities_rejected():
    with pytest.raises(InvariantViolationError):
        from_json(doc_with(0.4, 0.6))

def test_tie_break_order_enforced():
    text = json.dumps({
        "format_version": 1, "columns": ["A"], "metadata": {},
        "root": {"column": "A", "data": [
            {"value": 2, "probability": 0.5},
            {"value": 1, "probability": 0.5}]}})
    with pytest.raises(InvariantViolationError):
        from_json(text)

def test_duplicate_values_rejected():
    text = json.dumps({
        "format_version": 1, "columns": ["A"], "metadata": {},
        "root": {"column": "A", "data": [
            {"value": 1, "probability": 0.5},
            {"value": 1, "probability": 0.5}]}})
    with pytest.raises(InvariantViolationError):
        from_json(text)

def test_probability_out_of_range_rejected():
    with pytest.raises(InvariantViolationError):
        from_json(json.dumps({
            "format_version": 1, "columns": ["A"], "metadata": {},
            "root": {"column": "A", "data": [{"value": 1, "probability": 0.0}]}}))

def test_leaf_with_child_rejected():
    text = json.dumps({
        "format_version": 1, "columns": ["A"], "metadata": {},
        "root": {"column": "A", "data": [
            {"value": 1, "probability": 1.0,
             "child": {"column": "B", "data": [{"value": 2, "probability": 1.0}]}}]}})
    with pytest.raises(InvariantViolationError):
        from_json(text)

def test_missing_child_rejected():
    text = json.dumps({
        "format_version": 1, "columns": ["A", "B"], "metadata": {},
        "root": {"column": "A", "data": [{"value": 1, "probability": 1.0}]}})
    with pytest.raises(InvariantViolationError):
        from_json(text)

def test_wrong_column_label_rejected():
    text = json.dumps({
        "format_version": 1, "columns": ["A"], "metadata": {},
        "root": {"column": "Z", "data": [{"value": 1, "probability": 1.0}]}})
    with pytest.raises(InvariantViolationError):
        from_json(text)


# -- DOT emission ----------------------------------------------------------------

def test_single_chain_dot():
    tree = build_tree(CategoricalTable(("A", "B"), [(1, 2)]))
    vertices, edges = parse_dot(to_dot(tree))
    assert sorted(vertices.values()) == ["A, v=1", "A, v=1 | B, v=2 | Leaf"]
    assert len(edges) == 1
    frm, to, label = edges[0]
    assert vertices[frm] == "A, v=1"
    assert vertices[to] == "A, v=1 | B, v=2 | Leaf"
    assert label == "1.000000"

def test_micro_components_vertices_edges(micro_tree):
    vertices, edges = parse_dot(to_dot(micro_tree))
    assert len(vertices) == 9
    assert len(edges) == 6
    assert component_count(vertices, edges) == 3
    leaves = [v for v in vertices.values() if v.endswith("Leaf")]
    assert len(leaves) == 3

def test_single_root_joins_components(micro_tree):
    vertices, edges = parse_dot(to_dot(micro_tree, single_root=True))
    assert len(vertices) == 10
    assert len(edges) == 9
    assert component_count(vertices, edges) == 1
    root_edges = [e for e in edges if vertices[e[0]] == "root"]
    assert [e[2] for e in root_edges] == ["0.333333"] * 3

def test_edge_probability_formatting(survey_tree):
    _, edges = parse_dot(to_dot(survey_tree))
    for _, _, label in edges:
        assert len(label.split(".")[1]) == 6

def test_label_escaping():
    tree = build_tree(CategoricalTable(("A", "B"), [('he said "x"', "y\\z")]))
    vertices, _ = parse_dot(to_dot(tree))
    assert 'he said "x"' in " ".join(vertices.values())


# -- connected_components ----------------------------------------------------------

def test_micro_component_entries(micro_tree):
    comps = connected_components(micro_tree)
    assert [value for value, _ in comps] == [1, 2, 5]
    assert all(len(edges) == 2 for _, edges in comps)

def test_single_root_value_tree():
    tree = build_tree(CategoricalTable(("A", "B"), [(1, 2), (1, 3)]))
    comps = connected_components(tree)
    assert len(comps) == 1
    assert len(comps[0][1]) == 2

def test_component_edges_match_dot(micro_tree):
    vertices, dot_edges = parse_dot(to_dot(micro_tree))
    dot_set = {(vertices[a], vertices[b], label) for a, b, label in dot_edges}
    comp_set = {(e.from_label, e.to_label, f"{e.probability:.6f}")
                for _, edges in connected_components(micro_tree) for e in edges}
    assert dot_set == comp_set

def test_edge_count_identity():
    rng = random.Random(3)
    for _ in range(10):
        tree = build_tree(random_table(rng))
        edges = sum(len(e) for _, e in connected_components(tree))
        assert edges == node_count(tree) - len(tree.root.data)

def test_component_count_equals_root_entries():
    rng = random.Random(4)
    for _ in range(10):
        tree = build_tree(random_table(rng))
        vertices, edges = parse_dot(to_dot(tree))
        assert component_count(vertices, edges) == len(tree.root.data)
        assert len(vertices) == node_count(tree)

def test_edge_probabilities_in_range(survey_tree):
    for _, edges in connected_components(survey_tree):
        for edge in edges:
            assert 0.0 < edge.probability <= 1.0
