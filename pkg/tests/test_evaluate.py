import pytest
from hypothesis import given
from hypothesis import strategies as st

from depchange.evaluate import EvaluationError, accuracy, load_gold, spearman


def test_identical_ranks():
    assert spearman({"a": 1, "b": 2, "c": 3}, {"a": 10, "b": 20, "c": 30}) == pytest.approx(1.0)


def test_reversed_ranks():
    assert spearman({"a": 1, "b": 2, "c": 3}, {"a": 3, "b": 2, "c": 1}) == pytest.approx(-1.0)


def test_tie_in_gold():
    # ranks x = (1, 2, 3), y = (1.5, 1.5, 3): r = 1.5 / sqrt(2 * 1.5)
    assert spearman({"a": 1, "b": 2, "c": 3}, {"a": 1, "b": 1, "c": 3}) == pytest.approx(0.866025, abs=1e-6)


def test_spearman_errors():
    with pytest.raises(EvaluationError, match="mismatch"):
        spearman({"a": 1, "b": 2}, {"a": 1, "c": 2})
    with pytest.raises(EvaluationError):
        spearman({"a": 1}, {"a": 1})
    with pytest.raises(EvaluationError, match="undefined"):
        spearman({"a": 1, "b": 1}, {"a": 1, "b": 2})


@pytest.mark.parametrize(
    "pred, expected",
    [({"a": 1, "b": 0}, 1.0), ({"a": 1, "b": 1}, 0.5), ({"a": 0, "b": 1}, 0.0)],
)
def test_accuracy(pred, expected):
    assert accuracy(pred, {"a": 1, "b": 0}) == expected


def test_accuracy_mismatch():
    with pytest.raises(EvaluationError):
        accuracy({"a": 1}, {"b": 1})


def test_load_gold(tmp_path):
    b = tmp_path / "binary.tsv"
    g = tmp_path / "graded.tsv"
    b.write_text("attack_nn\t1\nplane_nn\t0\n")
    g.write_text("attack_nn\t0.1\nplane_nn\t0.88\n")
    gold = load_gold(b, g)
    assert gold.binary["attack_nn"] == 1
    assert gold.graded["plane_nn"] == 0.88


def test_load_gold_errors(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("a\t1\nb\t1\textra\n")
    with pytest.raises(EvaluationError, match=":2:"):
        load_gold(bad, None)
    nonbin = tmp_path / "nonbin.tsv"
    nonbin.write_text("a\t2\n")
    with pytest.raises(EvaluationError, match="non-binary"):
        load_gold(nonbin, None)


grid = st.integers(-500, 500).map(lambda i: i / 100)
keyed = st.dictionaries(st.text("abcdef", min_size=1, max_size=2), grid, min_size=2)


@given(keyed)
def test_self_correlation(d):
    if len(set(d.values())) < 2:
        return
    if len(set(d.values())) == len(d):
        assert spearman(d, d) == pytest.approx(1.0)


@given(keyed, st.data())
def test_symmetry_and_monotone_invariance(d, data):
    other = {k: data.draw(grid) for k in d}
    if len(set(d.values())) < 2 or len(set(other.values())) < 2:
        return
    rho = spearman(d, other)
    assert rho == pytest.approx(spearman(other, d), abs=1e-12)
    assert rho == pytest.approx(spearman({k: 2 * v + 7 for k, v in d.items()}, other), abs=1e-12)


@given(st.dictionaries(st.text("ab", min_size=1, max_size=3), st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1))
def test_accuracy_symmetric(d):
    p = {k: a for k, (a, _) in d.items()}
    g = {k: b for k, (_, b) in d.items()}
    assert accuracy(p, g) == accuracy(g, p)
