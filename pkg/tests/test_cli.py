"""CLI surface: exit codes, JSON schema stability, human/JSON agreement."""

import json

import pytest

from weincalc import combinatorics, verify
from weincalc.cli import main
from weincalc.symbolic import Lattice, PiGradedValue


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv, "--json")
    assert err == ""
    return code, json.loads(out)


def test_cpn_human_and_json_agree(capsys):
    code, out, _ = run_cli(capsys, "cpn", "--n", "2", "--k", "1")
    assert code == 0
    assert "q         = 1/3" in out
    assert "Finite(3)" in out
    assert "nontrivial" in out

    code, doc = run_json(capsys, "cpn", "--n", "2", "--k", "1")
    assert code == 0
    assert doc["schema"] == "weincalc/1"
    assert doc["q"] == "1/3"
    assert doc["order"] == {"kind": "finite", "order": 3}
    assert doc["nontrivial"] is True
    assert doc["status"] == "ok"
    # The value/lattice blocks round-trip through the symbolic serialization.
    assert PiGradedValue.from_json(doc["value"]).components[1].num.terms
    assert Lattice.from_json(doc["lattice"]).generators


def test_cpn_top_degree(capsys):
    code, doc = run_json(capsys, "cpn", "--n", "5", "--k", "5")
    assert code == 0
    assert doc["q"] == "1/2"
    assert doc["order"] == {"kind": "finite", "order": 2}


def test_cpn_rejects_out_of_range(capsys):
    code, out, err = run_cli(capsys, "cpn", "--n", "1", "--k", "2")
    assert code == 2
    assert "1 <= k <= n" in err


def test_blowup_infinite_order(capsys):
    code, doc = run_json(capsys, "blowup", "--n", "3", "--k", "1")
    assert code == 0
    assert doc["order"]["kind"] == "infinite"
    assert doc["flags"] == []


def test_blowup_top_degree_is_flagged(capsys):
    code, doc = run_json(capsys, "blowup", "--n", "2", "--k", "2")
    assert code == 0
    assert doc["order"] == {"kind": "finite", "order": 2}
    assert doc["flags"] == ["finite-order-at-k-equals-n"]


def test_blowup_numeric_weight(capsys):
    code, doc = run_json(capsys, "blowup", "--n", "2", "--k", "1", "--rho", "1/2")
    assert code == 0
    at = doc["at_rho"]
    assert at["x"] == "1/4"
    # f(1/4) = (1/3)(1/16 + 1/4 + 1)/(5/4) = 7/20.
    assert at["pi_k_coefficient"] == "7/20"
    assert abs(at["value_float"] - 0.35 * 3.141592653589793) < 1e-12


def test_blowup_rejects_bad_weight(capsys):
    code, _, err = run_cli(capsys, "blowup", "--n", "2", "--k", "1", "--rho", "3/2")
    assert code == 2
    assert "(0, 1)" in err


def test_moment_exact(capsys):
    code, doc = run_json(capsys, "moment", "--n", "1", "--l", "1", "--k", "1", "--r0", "1")
    assert code == 0
    assert doc["coefficient"] == "1/2"
    assert doc["pi_exp"] == 1
    assert doc["r0_exp"] == 4

    code, doc = run_json(capsys, "moment", "--n", "2", "--l", "2", "--k", "2", "--r0", "1")
    assert doc["coefficient"] == "1/4"  # pi^2/4
    assert doc["pi_exp"] == 2


def test_moment_with_mc(capsys):
    code, doc = run_json(
        capsys,
        "moment", "--n", "1", "--l", "1", "--k", "1",
        "--mc", "--samples", "100000", "--seed", "9",
    )
    assert code == 0
    assert doc["status"] == "ok"
    assert doc["mc"]["sigma_distance"] < 4
    assert doc["mc"]["samples"] == 100000


def test_moment_rejects_bad_range(capsys):
    code, _, err = run_cli(capsys, "moment", "--n", "1", "--l", "2", "--k", "1")
    assert code == 2
    assert "1 <= l <= n" in err


def test_identity_table(capsys):
    code, doc = run_json(capsys, "identity", "--k-max", "4")
    assert code == 0
    assert doc["all_ok"] is True
    assert [row["k"] for row in doc["rows"]] == [1, 2, 3, 4]
    assert doc["rows"][1]["bruteforce"] == "24"


def write_descriptor(tmp_path, doc):
    path = tmp_path / "manifold.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_product_with_sphere_descriptor(capsys, tmp_path):
    path = write_descriptor(
        tmp_path,
        {"dimension": 2, "trivial_odd_homotopy": [1], "periods": {"2": ["1"]}},
    )
    code, doc = run_json(capsys, "product", "--n", "2", "--k", "1", "--manifold", path)
    assert code == 0
    assert doc["nontrivial"] is True
    assert doc["order"] == {"kind": "finite", "order": 3}


def test_product_with_zero_class_matches_cpn_coset(capsys, tmp_path):
    path = write_descriptor(
        tmp_path,
        {
            "dimension": 6,
            "trivial_odd_homotopy": [3],
            "periods": {"2": ["1"], "4": ["1/2"]},
            "classes": {"zero": {"degree": 3, "value": []}},
        },
    )
    code, product_doc = run_json(
        capsys, "product", "--n", "3", "--k", "2", "--manifold", path, "--class", "zero"
    )
    assert code == 0
    code, cpn_doc = run_json(capsys, "cpn", "--n", "3", "--k", "2")
    assert product_doc["value"] == cpn_doc["value"]


def test_product_rejects_irrational_periods(capsys, tmp_path):
    path = write_descriptor(
        tmp_path,
        {"dimension": 2, "trivial_odd_homotopy": [1], "periods": {"2": ["sqrt(2)"]}},
    )
    code, _, err = run_cli(capsys, "product", "--n", "2", "--k", "1", "--manifold", path)
    assert code == 2
    assert "rational" in err


def test_product_rejects_missing_triviality_assertion(capsys, tmp_path):
    path = write_descriptor(
        tmp_path,
        {"dimension": 4, "trivial_odd_homotopy": [1], "periods": {"2": ["1"]}},
    )
    code, _, err = run_cli(capsys, "product", "--n", "2", "--k", "2", "--manifold", path)
    assert code == 2
    assert "degree 3" in err


def test_product_rejects_class_degree_mismatch(capsys, tmp_path):
    path = write_descriptor(
        tmp_path,
        {
            "dimension": 4,
            "trivial_odd_homotopy": [1, 3],
            "periods": {"2": ["1"]},
            "classes": {"loop": {"degree": 1, "value": []}},
        },
    )
    code, _, err = run_cli(
        capsys, "product", "--n", "2", "--k", "2", "--manifold", path, "--class", "loop"
    )
    assert code == 2
    assert "degree" in err


def test_verify_quick_passes(capsys):
    code, doc = run_json(capsys, "verify", "--quick")
    assert code == 0
    assert doc["status"] == "ok"
    assert [c["name"] for c in doc["checks"]] == [
        "identity-suite",
        "moment-sums",
        "ball-moments",
        "cpn-exact",
        "cpn-monte-carlo",
        "blowup",
        "product",
        "decision-procedures",
        "mc-determinism",
    ]
    assert all(c["passed"] for c in doc["checks"])


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["cpn", "--n", "2"])  # missing --k
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2


def test_verify_detects_corrupted_closed_form(monkeypatch):
    # Mutation harness: break the closed form and the identity check must fail.
    monkeypatch.setattr(
        combinatorics, "moment_sum_closed", lambda k, l: 2**k * k * (k + l)
    )
    result = verify.check_identity_suite(k_max=3)
    assert not result.passed
