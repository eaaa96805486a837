import pytest
from hypothesis import given
from hypothesis import strategies as st

from irmeasures import Measure, MeasureError, parse_measure, parse_measure_list, registry_lookup, render_measure
from irmeasures.names import AP, MAP, P, RBP, Judged, nDCG
from irmeasures.registry import ALIASES, SCHEMAS

CANONICAL = {
    "P", "R", "AP", "RR", "nDCG", "ERR", "RBP", "SDCG", "INST", "INSQ", "Bpref", "infAP",
    "IPrec", "Rprec", "Success", "Judged", "SetP", "SetR", "SetF", "SetAP", "NumQ", "NumRel",
    "NumRet", "NumRelRet", "Compat",
}


def test_registry_is_exactly_the_catalogue():
    assert set(SCHEMAS) == CANONICAL
    for name in CANONICAL:
        assert registry_lookup(name).name == name


@pytest.mark.parametrize("alias,name", [("MAP", "AP"), ("MRR", "RR"), ("NDCG", "nDCG"), ("R-Prec", "Rprec")])
def test_aliases(alias, name):
    assert registry_lookup(alias).name == name
    assert ALIASES[alias] == name


def test_aliases_are_case_sensitive():
    with pytest.raises(MeasureError):
        registry_lookup("map")
    with pytest.raises(MeasureError):
        registry_lookup("ndcg")


def test_diversity_measures_rejected():
    with pytest.raises(MeasureError, match="diversity measures unsupported"):
        registry_lookup("alpha_nDCG")
    with pytest.raises(MeasureError, match="unknown measure: XYZ"):
        parse_measure("XYZ@5")


def test_schema_defaults_valid():
    for schema in SCHEMAS.values():
        for spec in schema.params:
            assert spec.check(spec.default) == spec.default


@pytest.mark.parametrize(
    "expr,name,params,cutoff",
    [
        ("nDCG@10", "nDCG", {"gain": "linear"}, 10),
        ("nDCG@20", "nDCG", {"gain": "linear"}, 20),
        ("P(rel=2)@5", "P", {"rel": 2}, 5),
        ("AP(rel=2)", "AP", {"rel": 2}, None),
        ("Judged@10", "Judged", {}, 10),
        ("RBP", "RBP", {"p": 0.8, "gain": "binary"}, None),
        ("Compat", "Compat", {"p": 0.95}, None),
        ("INST(T=2)", "INST", {"T": 2.0}, None),
        ("IPrec@0.5", "IPrec", {"rel": 1}, 0.5),
        ("MAP(rel=3)@100", "AP", {"rel": 3}, 100),
        ("SetF(beta=0.5,rel=2)", "SetF", {"rel": 2, "beta": 0.5}, None),
    ],
)
def test_parse(expr, name, params, cutoff):
    m = parse_measure(expr)
    assert (m.name, m.kw, m.cutoff) == (name, params, cutoff)


@pytest.mark.parametrize(
    "expr,message",
    [
        ("nDCG@0", "cutoff must be >= 1"),
        ("RBP(p=1.5)", r"p out of range \(0,1\)"),
        ("RBP(p=0)", "out of range"),
        ("P", "requires a cutoff"),
        ("Bpref@10", "does not accept a cutoff"),
        ("AP(foo=1)", "unknown parameter"),
        ("AP(rel=x)", "integer"),
        ("AP(rel=1.5)", "integer"),
        ("AP(rel=1,rel=2)", "duplicate"),
        ("AP()", "empty parameter list"),
        ("AP(rel)", "malformed"),
        ("nDCG(gain=cubic)", "one of"),
        ("nDCG@10x", "integer"),
        ("nDCG@10@5", "invalid"),
        ("AP junk", "whitespace"),
        ("IPrec@1.5", r"\[0,1\]"),
        ("P(rel=0)@5", "out of range"),
        ("", "invalid"),
    ],
)
def test_parse_errors(expr, message):
    with pytest.raises(MeasureError, match=message):
        parse_measure(expr)


def test_render():
    assert render_measure(Measure("P", {"rel": 2}, 5)) == "P(rel=2)@5"
    assert render_measure(Measure("AP", {"rel": 1})) == "AP"
    assert render_measure(parse_measure("RBP(gain=graded,p=0.5)")) == "RBP(p=0.5,gain=graded)"
    assert str(parse_measure("MRR@10")) == "RR@10"


def test_equality_fills_defaults():
    assert parse_measure("AP") == parse_measure("AP(rel=1)") == Measure("MAP")
    assert hash(parse_measure("nDCG@10")) == hash(Measure("nDCG", {"gain": "linear"}, 10))
    assert parse_measure("AP(rel=2)") != parse_measure("AP")


def test_parse_list():
    assert [str(m) for m in parse_measure_list("nDCG@10 P(rel=2)@5 Judged@10")] == [
        "nDCG@10", "P(rel=2)@5", "Judged@10",
    ]
    assert parse_measure_list("") == []
    assert parse_measure_list("AP AP") == [parse_measure("AP")]
    assert parse_measure_list(["AP MAP", "P@1\tAP"]) == [parse_measure("AP"), parse_measure("P@1")]


def test_parse_list_reports_token():
    with pytest.raises(MeasureError, match="'XYZ@5'") as exc:
        parse_measure_list("AP XYZ@5")
    assert exc.value.token == "XYZ@5"


def test_natural_syntax():
    assert nDCG @ 10 == parse_measure("nDCG@10")
    assert P(rel=2) @ 5 == parse_measure("P(rel=2)@5")
    assert AP(rel=2).measure() == parse_measure("AP(rel=2)")
    assert MAP.measure() == parse_measure("AP")
    assert Judged @ 10 == parse_measure("Judged@10")
    assert repr(RBP(p=0.5)) == "RBP(p=0.5)"
    with pytest.raises(MeasureError):
        RBP(p=2.0)
    with pytest.raises(MeasureError):
        P.measure()


@given(st.text(max_size=30))
def test_parse_never_crashes(text):
    try:
        m = parse_measure(text)
    except MeasureError:
        return
    assert parse_measure(render_measure(m)) == m


@given(st.text(alphabet="APRnDCGSetJudgdQ()=,@.0123456789relpTgainx_-", max_size=25))
def test_parse_never_crashes_near_grammar(text):
    try:
        m = parse_measure(text)
    except MeasureError:
        return
    rendered = render_measure(m)
    assert render_measure(parse_measure(rendered)) == rendered
