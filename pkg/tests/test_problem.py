import json
import math

import pytest

from ostrunc.distributions import Kind
from ostrunc.errors import SpecError
from ostrunc.problem import benchmark_problem, dump_spec, load_spec, parse_spec

FIVE = [
    {"kind": "cauchy", "params": [5, 1]},
    {"kind": "normal", "params": [6, 2]},
    {"kind": "logistic", "params": [3, 2]},
    {"kind": "weibull", "params": [10, 1.5]},
    {"kind": "uniform", "params": [-5, 20]},
]


def doc(**overrides):
    base = {"distributions": FIVE, "k": 3, "bounds": {"lower": 3, "upper": 8}}
    base.update(overrides)
    return json.dumps(base)


def test_five_distribution_document():
    p = parse_spec(doc())
    assert (p.n, p.k, p.lower, p.upper) == (5, 3, 3.0, 8.0)
    assert [d.kind for d in p.dists] == [Kind.CAUCHY, Kind.NORMAL, Kind.LOGISTIC, Kind.WEIBULL, Kind.UNIFORM]
    assert p == benchmark_problem(3, 8)


def test_unbounded_single_uniform():
    p = parse_spec(
        {"distributions": [{"kind": "uniform", "params": [0, 1]}], "k": 1,
         "bounds": {"lower": "-inf", "upper": "inf"}}
    )
    assert p.n == 1 and p.k == 1
    assert p.lower == -math.inf and p.upper == math.inf
    assert p.a.tolist() == [0.0] and p.b.tolist() == [1.0]


def test_k_out_of_range():
    with pytest.raises(SpecError, match="k out of range"):
        parse_spec(doc(k=6))
    with pytest.raises(SpecError, match="k out of range"):
        parse_spec(doc(k=0))


@pytest.mark.parametrize(
    "text, field",
    [
        (doc(distributions=[{"kind": "gamma", "params": [1, 1]}]), "distributions[0].kind"),
        (doc(distributions=[{"kind": "normal", "params": [0, -1]}]), "distributions[0].params"),
        (doc(distributions=[{"kind": "normal", "params": [0]}]), "distributions[0].params"),
        (doc(distributions=[{"kind": "normal", "params": [0, 1], "w": 2}]), "distributions[0]"),
        (doc(bounds={"lower": 8, "upper": 3}), "bounds"),
        (doc(bounds={"lower": 3, "upper": 3}), "bounds"),
        (doc(bounds={"lower": "huge", "upper": 3}), "bounds.lower"),
        (doc(bounds={"lower": 3}), "bounds"),
        (doc(extra=1), "spec"),
        (doc(k=2.5), "k"),
        (doc(distributions=[]), "distributions"),
        ("{not json", "JSON"),
    ],
)
def test_errors_name_the_field(text, field):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert field in str(info.value)


def test_field_order_irrelevant():
    text = json.dumps({"bounds": {"upper": 8, "lower": 3}, "k": 3, "distributions": FIVE})
    assert parse_spec(text) == parse_spec(doc())


def test_cdf_at_bounds():
    p = parse_spec(doc())
    assert p.a[0] == pytest.approx(0.5 + math.atan(-2) / math.pi)
    assert p.b[4] == pytest.approx(13 / 25)
    assert (p.a <= p.b).all()


def test_file_round_trip(tmp_path):
    p = benchmark_problem(-math.inf, 8)
    path = tmp_path / "p.json"
    dump_spec(p, path)
    assert load_spec(path) == p
    assert json.loads(path.read_text())["bounds"]["lower"] == "-inf"


def test_with_bounds_keeps_other_side():
    p = benchmark_problem(3, 8).with_bounds(upper=9)
    assert (p.lower, p.upper) == (3, 9)
