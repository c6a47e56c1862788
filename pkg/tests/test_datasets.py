from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanfield.datasets import (Dataset, gen_linear, gen_nonlinear, load_digits_csv,
                                read_digits_rows, split, write_csv)
from meanfield.errors import EmptyClassError, InvalidArgumentError, ParseError
from meanfield.oracles import logistic_probe_accuracy, perceptron_separates

DIGITS = Path(__file__).resolve().parents[1] / "data" / "digits.csv"


def test_default_sizes():
    assert gen_linear().m == 51 and gen_nonlinear().m == 863
    assert gen_linear().n_features == 2


@pytest.mark.parametrize("gen", [gen_linear, gen_nonlinear])
def test_generators_deterministic(gen):
    a, b = gen(seed=3), gen(seed=3)
    assert np.array_equal(a.X, b.X) and np.array_equal(a.y, b.y)
    assert not np.array_equal(a.X, gen(seed=4).X)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 0.5))
def test_linear_margin_and_separability(seed, margin):
    ds = gen_linear(seed=seed, margin=margin)
    normal, offset = ds.boundary
    signed = ds.X @ normal + offset
    assert np.all(np.abs(signed) >= margin)
    assert np.array_equal(signed > 0, ds.y == 1)
    assert np.all(np.abs(ds.X) <= 1)
    assert perceptron_separates(ds.X, ds.y)


def test_linear_has_both_classes():
    for seed in range(20):
        assert 0 < gen_linear(seed=seed).y.sum() < 51


def test_nonlinear_noise_free_geometry():
    ds = gen_nonlinear(seed=1, noise=0.0)
    upper = ds.X[ds.y == 0]
    lower = ds.X[ds.y == 1] - np.array([1.0, 0.5])
    assert np.max(np.abs(np.hypot(*upper.T) - 1)) <= 1e-12
    assert np.max(np.abs(np.hypot(*lower.T) - 1)) <= 1e-12
    assert np.all(upper[:, 1] >= 0) and np.all(lower[:, 1] <= 0)
    assert abs(int(ds.y.sum()) - 863 // 2) <= 1


def test_nonlinear_not_linearly_separable():
    assert logistic_probe_accuracy(gen_nonlinear().X, gen_nonlinear().y) < 0.95


def test_generator_argument_errors():
    with pytest.raises(InvalidArgumentError):
        gen_linear(m=1)
    with pytest.raises(InvalidArgumentError):
        gen_linear(margin=1.0)
    with pytest.raises(InvalidArgumentError):
        gen_nonlinear(noise=-0.1)


def test_digits_file_shape():
    rows = read_digits_rows(DIGITS)
    assert len(rows[0]) == 1797
    assert rows[0].shape[1] == 64 and set(np.unique(rows[1])) == set(range(10))


def test_digits_binary_subset():
    ds = load_digits_csv(DIGITS, 0, 1)
    assert ds.n_features == 64
    assert ds.X.min() >= 0 and ds.X.max() <= 1
    assert 0 < ds.y.sum() < ds.m
    assert ds.m == 360


def test_all_zero_row_is_valid(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text(",".join(["0"] * 64 + ["0"]) + "\n" + ",".join(["16"] * 64 + ["1"]) + "\n")
    ds = load_digits_csv(p)
    assert ds.m == 2 and ds.X[0].sum() == 0 and ds.X[1].max() == 1.0


@pytest.mark.parametrize("bad, reason", [
    (["1"] * 63 + ["0"], "65 fields"),
    (["x"] + ["1"] * 63 + ["0"], "non-integer"),
    (["17"] + ["1"] * 63 + ["0"], "outside"),
    (["1"] * 64 + ["12"], "label"),
])
def test_digits_parse_error_reports_line(tmp_path, bad, reason):
    p = tmp_path / "d.csv"
    good = ",".join(["1"] * 64 + ["0"])
    p.write_text(good + "\n" + good + "\n" + ",".join(bad) + "\n")
    with pytest.raises(ParseError) as info:
        read_digits_rows(p)
    assert info.value.line == 3 and reason in str(info.value)


def test_digits_missing_class(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text(",".join(["1"] * 64 + ["0"]) + "\n")
    with pytest.raises(EmptyClassError):
        load_digits_csv(p, 0, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 300), st.floats(0.05, 0.6), st.integers(0, 100))
def test_split_partitions(m, frac, seed):
    ds = Dataset(np.arange(m, dtype=float)[:, None], (np.arange(m) % 2).astype(float), "t")
    tr, te = split(ds, frac, seed)
    assert tr.m + te.m == m and te.m == int(np.ceil(m * frac))
    assert set(tr.X[:, 0]).isdisjoint(te.X[:, 0])
    tr2, te2 = split(ds, frac, seed)
    assert np.array_equal(tr.X, tr2.X) and np.array_equal(te.X, te2.X)


def test_write_csv_roundtrip(tmp_path):
    ds = gen_linear(seed=2)
    p = tmp_path / "lin.csv"
    write_csv(ds, p)
    data = np.loadtxt(p, delimiter=",")
    assert np.array_equal(data[:, :2], ds.X) and np.array_equal(data[:, 2], ds.y)
