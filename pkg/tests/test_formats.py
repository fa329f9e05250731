import math

import numpy as np
import pytest

from phylolattice import (
    Interval,
    LabeledMergegram,
    Mergegram,
    PersistenceDiagram,
    cliquegram_from_network,
    diagram_svg,
    face_reeb_graph,
    gram_json,
    labeled_mergegram,
    labeled_mergegram_json,
    line_plot_svg,
    mergegram,
    mergegram_json,
    parse_gram_json,
    parse_matrix_csv,
    parse_mergegram_json,
    reeb_dot,
    serialize_matrix_csv,
    treegram_from_ultranetwork,
)

from util import random_network, random_ultrametric, taxa

INF = math.inf


class TestMatrixCSV:
    def test_round_trip(self, rng):
        for _ in range(10):
            net = random_network(taxa(5), rng, late=True)
            back = parse_matrix_csv(serialize_matrix_csv(net))
            assert back.universe == net.universe
            assert np.array_equal(back.matrix, net.matrix)

    def test_serialization_is_canonical(self, rng):
        net = random_network(taxa(3), rng)
        assert serialize_matrix_csv(net) == serialize_matrix_csv(
            parse_matrix_csv(serialize_matrix_csv(net))
        )

    def test_quoted_labels(self):
        text = '"x,1","y 2"\n0,3\n3,0\n'
        net = parse_matrix_csv(text)
        assert net.universe.labels == ("x,1", "y 2")
        assert "x,1" in serialize_matrix_csv(net)

    def test_empty_document(self):
        with pytest.raises(ValueError, match="empty matrix document"):
            parse_matrix_csv("\n  \n")

    def test_row_count(self):
        with pytest.raises(ValueError, match="expected 2 data rows"):
            parse_matrix_csv("a,b\n0,1\n")

    def test_cell_count(self):
        with pytest.raises(ValueError, match="row 3 has 3 cells, expected 2"):
            parse_matrix_csv("a,b\n0,1\n1,0,9\n")

    def test_non_numeric_cell(self):
        with pytest.raises(ValueError, match="row 2, column 2: 'oops'"):
            parse_matrix_csv("a,b\n0,oops\n1,0\n")

    def test_network_rules_still_apply(self):
        with pytest.raises(ValueError, match="asymmetric"):
            parse_matrix_csv("a,b\n0,1\n2,0\n")


class TestGramJSON:
    def test_round_trip(self, rng):
        for _ in range(10):
            g = cliquegram_from_network(random_network(taxa(5), rng, late=True))
            back = parse_gram_json(gram_json(g))
            assert back == g
            assert back.kind == g.kind

    def test_byte_identical_round_trip(self, rng):
        g = treegram_from_ultranetwork(random_ultrametric(taxa(4), rng))
        text = gram_json(g)
        assert gram_json(parse_gram_json(text)) == text

    def test_schema_violations(self):
        with pytest.raises(ValueError, match="not valid JSON"):
            parse_gram_json("{nope")
        with pytest.raises(ValueError, match="top level"):
            parse_gram_json("[1]")
        with pytest.raises(ValueError, match='"format"'):
            parse_gram_json('{"type": "gram"}')
        with pytest.raises(ValueError, match='"type"'):
            parse_gram_json('{"format": "phylolattice/1", "type": "matrix"}')
        doc = '{"format": "phylolattice/1", "type": "gram", "kind": "heap", "taxa": ["a"], "levels": []}'
        with pytest.raises(ValueError, match="unknown gram kind"):
            parse_gram_json(doc)
        doc = '{"format": "phylolattice/1", "type": "gram", "kind": "facegram", "taxa": [1], "levels": []}'
        with pytest.raises(ValueError, match="list of strings"):
            parse_gram_json(doc)
        doc = '{"format": "phylolattice/1", "type": "gram", "kind": "facegram", "taxa": ["a"], "levels": [{"t": 0}]}'
        with pytest.raises(ValueError, match='needs "t" and "faces"'):
            parse_gram_json(doc)

    def test_gram_rules_still_apply(self):
        doc = (
            '{"format": "phylolattice/1", "type": "gram", "kind": "facegram",'
            ' "taxa": ["a", "b"], "levels": [{"t": 0, "faces": [["a"]]}]}'
        )
        with pytest.raises(ValueError, match="full face"):
            parse_gram_json(doc)


class TestMergegramJSON:
    def test_mergegram_round_trip(self, rng):
        g = cliquegram_from_network(random_network(taxa(5), rng))
        m = mergegram(g)
        back = parse_mergegram_json(mergegram_json(m))
        assert back == m
        assert isinstance(back, Mergegram)

    def test_diagram_round_trip(self):
        pd = PersistenceDiagram([(0, 1), (0, 1), (2, 2), (0, INF)])
        back = parse_mergegram_json(mergegram_json(pd))
        assert back == pd
        assert isinstance(back, PersistenceDiagram)

    def test_labeled_round_trip(self, rng):
        lm = labeled_mergegram(
            treegram_from_ultranetwork(random_ultrametric(taxa(4), rng, late=True))
        )
        back = parse_mergegram_json(labeled_mergegram_json(lm))
        assert back == lm

    def test_infinite_death_encoding(self):
        text = mergegram_json(Mergegram([(0, INF)]))
        assert '"death": "inf"' in text

    def test_empty_mergegram(self):
        text = mergegram_json(Mergegram())
        assert '"points": []' in text
        assert parse_mergegram_json(text) == Mergegram()

    def test_duplicate_label_rejected(self):
        doc = (
            '{"format": "phylolattice/1", "type": "labeled-mergegram",'
            ' "taxa": ["a"],'
            ' "points": [{"birth": 0, "death": 1, "label": ["a"]},'
            '            {"birth": 1, "death": 2, "label": ["a"]}]}'
        )
        with pytest.raises(ValueError, match="listed twice"):
            parse_mergegram_json(doc)

    def test_bad_death(self):
        doc = (
            '{"format": "phylolattice/1", "type": "mergegram",'
            ' "points": [{"birth": 0, "death": "soon"}]}'
        )
        with pytest.raises(ValueError, match="bad death value"):
            parse_mergegram_json(doc)


class TestReebDot:
    def test_structure(self, rng):
        g = treegram_from_ultranetwork(random_ultrametric(taxa(3), rng))
        r = face_reeb_graph(g)
        dot = reeb_dot(r)
        assert dot.startswith("graph reeb {")
        assert dot.rstrip().endswith("}")
        assert dot.count("--") == r.finite_edge_count + 1
        assert "style=dashed" in dot  # the half-infinite edge
        assert 'top [label="inf"' in dot
        for i, count in enumerate(r.vertex_counts):
            for k in range(count):
                assert f"v{i}_{k} " in dot


class TestSVG:
    def test_diagram_elements(self):
        m = Mergegram([(0, 1, 3), (0.5, INF)])
        svg = diagram_svg(m, title="demo")
        assert svg.startswith("<svg ")
        assert svg.count("<circle") == 4  # 1 dot + 2 rings, plus the inf dot
        assert ">demo<" in svg
        assert ">inf<" in svg

    def test_diagram_labels_from_faces(self):
        ts = taxa(2)
        lm = LabeledMergegram(
            ts, {0b01: Interval(0, 1), 0b11: Interval(1, INF)}
        )
        svg = diagram_svg(lm)
        assert "{a}" in svg
        assert "{a,b}" in svg

    def test_line_plot(self):
        svg = line_plot_svg(
            {"one": [(0, 0), (1, 1)], "two": [(0, 1), (1, 0)]},
            x_label="k",
            y_label="d",
        )
        assert svg.count("<polyline") == 2
        assert ">one<" in svg and ">two<" in svg
        assert ">k<" in svg
