import collections

import pytest

import strata_bench as sb

SPEC = """
rows = 1500
signal = 0.9
[label y]
classes = A, B, C
proportions = 0.6, 0.3, 0.1
[attribute g]
kind = nominal
categories = a, b, c
base = 0.4, 0.3, 0.3
class.A = 0.8, 0.1, 0.1
class.B = 0.1, 0.8, 0.1
class.C = 0.1, 0.1, 0.8
[attribute x]
kind = numeric
base = 0, 1
class.A = -1, 1
class.B = 0, 1
class.C = 1, 1
"""


@pytest.fixture(scope="module")
def data():
    return sb.synthesize(SPEC, seed=7)


def test_recode():
    assert sb.recode_survival_months("1003") == 123
    with pytest.raises(sb.FormatError):
        sb.recode_survival_months("1x03")


def test_synthesize_is_deterministic(data):
    assert len(data) == 1500
    assert data.columns == ["g", "x", "y"]
    assert data.label == "y"
    assert data == sb.synthesize(SPEC, seed=7, jobs=3)
    assert not data == sb.synthesize(SPEC, seed=8)


def test_csv_round_trip(data, tmp_path):
    path = str(tmp_path / "d.csv")
    sb.write_dataset(data, path)
    assert sb.read_dataset(path) == data
    assert sb.dataset_from_csv(data.to_csv(), data.schema_csv()) == data


def test_allocation():
    assert sb.allocate_proportional([60, 40], 10) == [6, 4]
    assert sb.allocate_balanced([1000, 800, 50], 600) == ([300, 300, 0], 0)
    with pytest.raises(sb.CapacityError):
        sb.allocate_balanced([100, 80, 10], 500)


def test_balanced_sample(data):
    s = sb.sample(data, "y", "balanced", 300, seed=1)
    assert collections.Counter(s.column_values("y")) == {"A": 100, "B": 100, "C": 100}


def test_train_and_predict(data):
    train = sb.sample(data, "y", "stratified", 900, seed=2)
    preds = sb.train_and_predict("dt", train, data)
    assert len(preds) == len(data)
    hits = sum(p == t for p, t in zip(preds, data.column_values("y")))
    assert hits / len(data) > 0.6


def test_run_cell_and_grid(data):
    cell = sb.run_cell(data, "y", "random", "nb", 300, seed=3, iterations=2)
    assert cell["status"] == "ok"
    assert cell["best"] == max(cell["accuracies"])
    grid = sb.run_grid("labels = y\nstrategies = balanced\nclassifiers = dt, nb, knn\nsizes = 150, 300\n"
                       "iterations = 2\n", {"d": data})
    assert len(grid["cells"]) == 6
    assert "| Sample Size | Balanced DT | Balanced NB | Balanced KNN |" in grid["markdown"]
    assert sb.format_percent(0.8472) == "84.72%"


def test_mix(data):
    other = sb.synthesize(SPEC, seed=9)
    m = sb.mix(data, other, 100, 50, seed=1, name_a="left", name_b="right")
    assert len(m) == 150
    assert collections.Counter(m.column_values("source")) == {"left": 100, "right": 50}


def test_cli():
    code, out, err = sb.run_cli(["frobnicate"])
    assert code == 2
    code, out, _ = sb.run_cli(["--help"])
    assert code == 0 and "synth" in out
