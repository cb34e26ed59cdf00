import json
from fractions import Fraction

import mpmath
import pytest

from twistzeta.config import ModelConfig, bundled_configs, load_config, resolve_config_path
from twistzeta.errors import ConfigError, PreconditionError
from twistzeta.report import run_pipeline, scan_iterates
from twistzeta.spectral import FAILS, HOLDS

FIB = [[2, 3], [1, 2]]


def cfg(**kw):
    return ModelConfig.from_dict(kw)


def test_bundled_configs_resolve():
    assert {"torus_q2", "e3_example", "constant"} <= set(bundled_configs())
    assert resolve_config_path("examples/torus_q2.json").name == "torus_q2.json"
    assert load_config("e3_example").matrix == ((2, 3, 0), (1, 2, 0), (0, 0, 1))
    with pytest.raises(ConfigError):
        resolve_config_path("no/such/model.json")


def test_config_validation():
    with pytest.raises(ConfigError):
        cfg(kind="torus", q=2)  # no matrix
    with pytest.raises(ConfigError):
        cfg(kind="sphere", q=2)
    with pytest.raises(ConfigError):
        cfg(kind="constant", q=6)
    with pytest.raises(ConfigError):
        cfg(kind="constant", q=2, iterate=0)
    with pytest.raises(ConfigError):
        cfg(kind="torus", q=2, matrix=[[1, "1/2"], [0, 1]])
    with pytest.raises(ConfigError):
        cfg(kind="torus", q=2, matrix=FIB, colour="red")
    with pytest.raises(ConfigError):
        cfg(kind="abelian_product", q=5, matrix=[[1]])  # neither trace nor curve
    with pytest.raises(ConfigError):
        cfg(kind="abelian_product", q=5, matrix=[[1]], frob_trace=2, curve=[1, 1])
    with pytest.raises(ConfigError):
        cfg(kind="torus", q=2, matrix=[[1, 2], [2, 4]]).graded_action()
    with pytest.raises(ConfigError):
        cfg(kind="torus", q=2.0, matrix=FIB)


def test_integers_as_strings_and_rationals():
    big = str(2**70)
    c = cfg(kind="custom_graded", q="3", pieces=[
        {"degree": 0, "weight": 0, "f_action": [["1/2"]], "frob_action": [[1]]},
        {"degree": 1, "weight": 0, "f_action": [[big]], "frob_action": [[1]]},
    ])
    assert c.q == 3
    assert c.pieces[0].f_action == ((Fraction(1, 2),),)
    assert c.to_dict()["pieces"][1]["f_action"] == [[big]]
    assert c.to_dict()["pieces"][0]["f_action"] == [["1/2"]]


@pytest.mark.parametrize("name", ["torus_q2", "e3_example", "constant", "e1_curve"])
def test_config_round_trip(name):
    c = load_config(name)
    rep = run_pipeline(c)
    assert ModelConfig.from_dict(json.loads(json.dumps(rep.config))) == c


def test_pipeline_torus():
    rep = run_pipeline(load_config("torus_q2"))
    assert rep.spectral["ineq1"] == FAILS
    assert rep.n0 == {"status": "found", "value": 2, "max_twist": 8}
    assert rep.positivity["first_violation"] == 1
    assert rep.disc_lemma["verdict"] == FAILS and not rep.disc_lemma["contradiction"]
    assert rep.contradictions == []
    assert rep.traces[:3] == ["-3/1", "-39/1", "-351/1"]


def test_pipeline_e3():
    rep = run_pipeline(load_config("e3_example"))
    s = rep.spectral
    assert (s["ineq1"], s["ineq2"], s["k_even"], s["k_odd"]) == (HOLDS, HOLDS, 4, 3)
    assert rep.contradictions == [] and rep.weight_violations == []
    assert rep.zeta["agreement"]


def test_pipeline_constant():
    rep = run_pipeline(load_config("constant"))
    assert rep.zeta["reconstructed"] == {"numerator": ["1/1"], "denominator": ["1/1", "-1/1"]}
    assert rep.n0["status"] == "not-applicable"


def test_pipeline_records_but_does_not_raise_on_fails():
    rep = run_pipeline(cfg(kind="torus", q=3, matrix=[[3, 1], [1, 0]]))
    assert rep.spectral["ineq1"] == FAILS


def test_contradiction_is_recorded():
    # a "proper" claim that cannot be true: odd radius 3 against even radius 1
    bogus = cfg(kind="custom_graded", q=4, proper=True, pieces=[
        {"degree": 0, "weight": 0, "f_action": [[1]], "frob_action": [[1]]},
        {"degree": 1, "weight": 1, "f_action": [[3]], "frob_action": [[2]]},
    ])
    rep = run_pipeline(bogus)
    assert any("lambda_even < lambda_odd" in c for c in rep.contradictions)


def test_reports_are_byte_identical():
    for name in ("torus_q2", "constant"):
        a = run_pipeline(load_config(name)).to_json()
        b = run_pipeline(load_config(name)).to_json()
        assert a == b
        tree = json.loads(a)
        assert list(tree) == sorted(tree)
        assert tree["run_hash"] == run_pipeline(load_config(name)).run_hash


def test_scan_iterates_e3_radii_scale():
    base = load_config("e3_example")
    reps = scan_iterates(base, 3)
    assert [r.config["iterate"] for r in reps] == [1, 2, 3]
    lam1 = reps[0].details.spectral.lambda_even
    for r, rep in enumerate(reps, start=1):
        assert rep.spectral["ineq1"] == HOLDS
        lam = rep.details.spectral.lambda_even
        # lambda(f^r) = lambda(f)^r: the r-th power of the r = 1 bracket must meet it
        assert lam.lo <= lam1.hi**r and lam1.lo**r <= lam.hi
        with mpmath.workdps(50):
            exact = (2 + mpmath.sqrt(3)) ** (2 * r)
            assert mpmath.mpf(lam.lo.numerator) / lam.lo.denominator <= exact
            assert exact <= mpmath.mpf(lam.hi.numerator) / lam.hi.denominator


def test_scan_iterates_torus_and_trivial_case():
    reps = scan_iterates(load_config("torus_q2"), 2)
    assert [r.spectral["ineq1"] for r in reps] == [FAILS, FAILS]
    single = scan_iterates(load_config("torus_q2"), 1)
    assert len(single) == 1
    assert single[0].to_json() == run_pipeline(load_config("torus_q2")).to_json()
    with pytest.raises(PreconditionError):
        scan_iterates(load_config("torus_q2"), 0)
