import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from homdefo import documents as D
from homdefo.cli import run

DATA = Path(__file__).resolve().parent.parent / "data"
UPPER = {"kind": "algebra", "dim": 2, "mu1": [[0, 0, 0, 1], [0, 1, 1, 1]]}
RIGID = {"kind": "algebra", "dim": 2, "mu1": [[0, 0, 0, 1], [1, 0, 1, 1]],
         "mu2": [[0, 1, 0, 1], [1, 1, 1, 1]]}
MIXED = {"kind": "algebra", "dim": 2, "mu1": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]],
         "mu2": [[0, 0, 0, 1], [0, 1, 1, 1]]}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--json")
    env = json.loads(out)
    assert env["exit_code"] == code
    assert set(env) == {"command", "inputs", "results", "witnesses", "exit_code"}
    return code, env


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="doc.json"):
        p = tmp_path / name
        p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
        return p
    return _write


def data(name):
    return DATA / name


# -- verify --------------------------------------------------------------------

def test_verify_valid_algebra():
    code, out, _ = call("verify", data("dual_numbers.json"))
    assert code == 0 and "ok: True" in out


def test_verify_invalid_twist_reports_witnesses():
    code, env = call_json("verify", data("bad_twist.json"))
    assert code == 1 and env["witnesses"]
    assert env["results"]["maurer_cartan_agrees"] is True


def test_verify_incompatible_pair(write):
    code, env = call_json("verify", write(MIXED))
    assert code == 1
    assert any(w["identity"].startswith("compat") for w in env["witnesses"])


def test_verify_bimodule():
    assert call("verify", data("dual_numbers_adjoint.json"))[0] == 0


# -- cohomology ------------------------------------------------------------------

def test_cohomology_zero_algebra_degree_two():
    code, out, _ = call("cohomology", data("zero_dim1.json"), "--module", "adjoint", "--degree", 2)
    assert code == 0 and "dim_H: 2" in out


def test_cohomology_json_dims():
    code, env = call_json("cohomology", data("dual_numbers.json"), "--module", "adjoint")
    assert code == 0
    degs = env["results"]["degrees"]
    assert degs["1"]["dim_H"] == 1 and degs["2"]["dim_H"] == 5


def test_cohomology_with_module_file():
    code, env = call_json("cohomology", data("dual_numbers.json"), "--module",
                          data("dual_numbers_adjoint.json"), "--degree", 2)
    assert code == 0 and env["results"]["dim_H"] == 5


def test_cohomology_of_bimodule_document():
    code, env = call_json("cohomology", data("dual_numbers_adjoint.json"), "--degree", 1)
    assert code == 0 and env["results"]["dim_H"] == 1


def test_cohomology_needs_module_for_algebra():
    code, out, err = call("cohomology", data("dual_numbers.json"))
    assert code == 2 and "--module" in err and out == ""


def test_cohomology_rejects_module_flag_on_bimodule():
    assert call("cohomology", data("dual_numbers_adjoint.json"), "--module", "adjoint")[0] == 2


def test_cohomology_on_invalid_input_fails():
    assert call("cohomology", data("bad_twist.json"), "--module", "adjoint")[0] == 1


def test_cohomology_degree_limit():
    code, env = call_json("cohomology", data("dual_numbers.json"), "--module", "adjoint",
                          "--degree", 3, "--max-degree", 2)
    assert code == 3 and "resource limit" in env["results"]["error"]


def test_cohomology_cell_limit():
    assert call("cohomology", data("dual_numbers.json"), "--module", "adjoint", "--degree", 3,
                "--max-cells", 10)[0] == 3


def test_cohomology_cell_limit_from_environment():
    proc = subprocess.run([sys.executable, "-m", "homdefo.cli", "cohomology",
                           str(data("dual_numbers.json")), "--module", "adjoint", "--degree", "3"],
                          capture_output=True, text=True,
                          env={"HOMDEFO_MAX_CELLS": "10", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 3


def test_cohomology_bad_degree():
    assert call("cohomology", data("dual_numbers.json"), "--module", "adjoint", "--degree", 0)[0] == 2


# -- parse and usage errors --------------------------------------------------------

@pytest.mark.parametrize("content,code", [
    ("{not json", D.E_JSON),
    (json.dumps({"kind": "algebra", "dim": 2, "mu1": [[0, 0, 0, "1/0"]]}), D.E_ZERO_DENOM),
    (json.dumps({"kind": "algebra", "dim": 2, "mu1": [[0, 0, 2, 1]]}), D.E_INDEX),
])
def test_parse_errors_exit_two(write, content, code):
    rc, env = call_json("verify", write(content))
    assert rc == 2 and env["results"]["issues"][0]["code"] == code


def test_missing_file_exit_two(tmp_path):
    rc, out, err = call("verify", tmp_path / "absent.json")
    assert rc == 2 and D.E_IO in err


def test_wrong_kind_exit_two():
    assert call("deform", "verify", data("dual_numbers.json"))[0] == 2


def test_unknown_command_exit_two():
    assert call("frobnicate")[0] == 2


def test_help_exit_zero():
    assert call("--help")[0] == 0


# -- bracket, construct, homlie ------------------------------------------------------

def test_bracket_checks_maurer_cartan(write):
    assert call("bracket", data("dual_numbers.json"))[0] == 0
    code, env = call_json("bracket", write(MIXED))
    assert code == 1 and env["results"]["axioms_agree"] is True


def test_bracket_of_cochains(write):
    f = write({"kind": "cochain", "algebra": UPPER, "degree": 2,
               "parts": [[[0, 0, 0, 1], [0, 1, 1, 1]], []]}, "f.json")
    code, env = call_json("bracket", write(UPPER, "a.json"), "--f", f, "--g", f)
    # [mu, mu] = 0 exactly because the product is associative
    assert code == 0 and env["results"]["arity"] == 3 and env["results"]["bracket"] == []


def test_bracket_needs_both_cochains(write):
    assert call("bracket", write(UPPER), "--f", write(UPPER, "x.json"))[0] == 2


def test_construct_yau_round_trips(write):
    code, env = call_json("construct", "yau", data("dual_numbers.json"), "--op", "[[1,0],[0,-1]]")
    assert code == 0
    res = D.parse_text(json.dumps(env["results"]["algebra"]))
    assert res.ok and res.document.payload["algebra"].alpha[1, 1] == -1


def test_construct_nijenhuis():
    code, env = call_json("construct", "nijenhuis", data("dual_numbers.json"), "--op", "[[0,0],[1,0]]")
    assert code == 0 and env["results"]["algebra"]["mu2"] == [[0, 0, 1, "1"]]


def test_construct_semidirect():
    code, env = call_json("construct", "semidirect", data("dual_numbers_adjoint.json"))
    assert code == 0 and env["results"]["algebra"]["dim"] == 4


def test_construct_derived():
    assert call("construct", "derived", data("dual_numbers.json"), "--n", 2)[0] == 0
    assert call("construct", "derived", data("dual_numbers.json"))[0] == 2


def test_construct_rejects_non_morphism(write):
    assert call("construct", "yau", write(UPPER), "--op", "[[0,1],[1,0]]")[0] == 1


def test_construct_bad_inline_matrix():
    assert call("construct", "yau", data("dual_numbers.json"), "--op", "[[1,0]]")[0] == 2
    assert call("construct", "yau", data("dual_numbers.json"), "--op", "[[1,")[0] == 2


def test_homlie_check(write):
    code, env = call_json("homlie-check", write(UPPER))
    assert code == 0 and env["results"]["bracket1"] == [[0, 1, 1, "1"], [1, 0, 1, "-1"]]
    code, env = call_json("homlie-check", data("dual_numbers_adjoint.json"))
    assert code == 0 and env["results"]["representation_ok"] is True


# -- deformations --------------------------------------------------------------------

def test_deform_verify():
    assert call("deform", "verify", data("dual_numbers_def.json"))[0] == 0


def test_deform_extend_order_one():
    code, env = call_json("deform", "extend", data("dual_numbers_def.json"), "--order", 1)
    assert code == 0 and env["results"]["order"] == 2
    again = D.parse_text(json.dumps(env["results"]["deformation"]))
    assert again.ok and len(again.document.payload["mu1"]) == 2


def test_extend_alias_matches():
    a = call_json("extend", data("dual_numbers_def.json"))[1]["results"]
    b = call_json("deform", "extend", data("dual_numbers_def.json"))[1]["results"]
    assert a == b


def test_deform_infinitesimal_and_obstruction():
    assert call("deform", "infinitesimal", data("dual_numbers_def.json"))[0] == 0
    code, env = call_json("obstruction", data("dual_numbers_def.json"))
    assert code == 0 and env["results"]["class_vanishes"] is True


def test_deform_reduce_non_trivial():
    code, env = call_json("deform", "reduce", data("dual_numbers_def.json"))
    assert code == 1 and env["results"]["trivial"] is False and env["results"]["index"] == 1


def _deformation(base, mu1=(), mu2=(), alpha=(), order=None):
    doc = {"kind": "deformation", "base": base,
           "jets": {"mu1": list(mu1), "mu2": list(mu2), "alpha": list(alpha)}}
    if order is not None:
        doc["order"] = order
    return doc


def test_deform_reduce_trivial_on_rigid(write):
    # order-one jets delta(psi) for psi = E_01, computed with the package's own sign convention
    from homdefo.deform import FormalIsomorphismJet, TruncatedDeformation, apply_isomorphism
    A = D.parse_text(json.dumps(RIGID)).document.payload["algebra"]
    d = apply_isomorphism(TruncatedDeformation.trivial(A, 1),
                          FormalIsomorphismJet([[[0, 1], [0, 0]]]))
    doc = D.deformation_json(A, d.mu1_jets, d.mu2_jets, d.alpha_jets)
    code, env = call_json("deform", "reduce", write(doc))
    assert code == 0 and env["results"]["trivial"] is True


def test_deform_obstructed(write):
    zero2 = {"kind": "algebra", "dim": 2, "mu1": []}
    doc = _deformation(zero2, mu1=[[1, [[0, 0, 1, 1], [1, 0, 0, 1]]]])
    code, env = call_json("deform", "extend", write(doc))
    assert code == 1 and env["results"]["reason"] == "obstruction class is nonzero"
    assert call("obstruction", write(doc, "o.json"))[0] == 1


def test_deform_invalid_jets_fail(write):
    dual = json.loads(data("dual_numbers.json").read_text())
    doc = _deformation(dual, mu1=[[1, [[0, 0, 0, 1]]]])
    assert call("deform", "verify", write(doc))[0] == 1
    assert call("deform", "extend", write(doc, "e.json"))[0] == 1


def test_deform_indeterminate_with_alpha_jet(write):
    one = {"kind": "algebra", "dim": 1, "mu1": []}
    doc = _deformation(one, mu1=[[1, [[0, 0, 0, 1]]]], alpha=[[1, [["1"]]]])
    code, env = call_json("deform", "infinitesimal", write(doc))
    assert code == 1 and env["results"]["indeterminate"] is True
    assert call("deform", "extend", write(doc, "x.json"))[0] == 2


def test_deform_non_equivariant_jet(write):
    yau = {"kind": "algebra", "dim": 2, "mu1": [[0, 0, 0, 1], [0, 1, 1, -1], [1, 0, 1, -1]],
           "alpha": [[1, 0], [0, -1]]}
    doc = _deformation(yau, mu1=[[1, [[0, 0, 1, 1]]]])
    assert call("deform", "verify", write(doc))[0] == 1


def test_deform_order_cap(write):
    one = {"kind": "algebra", "dim": 1, "mu1": []}
    assert call("deform", "verify", write(_deformation(one, order=12)))[0] == 3


# -- extensions -------------------------------------------------------------------------

def test_extension_with_compare():
    code, env = call_json("extension", data("dual_numbers_ext.json"))
    assert code == 0
    r = env["results"]
    assert r["round_trip"] is True and r["equivalent"] is True
    assert D.parse_text(json.dumps(r["total"])).ok


def test_extension_inequivalent_compare(write):
    doc = json.loads(data("dual_numbers_ext.json").read_text())
    doc["compare"] = {"degree": 2, "parts": [[], []]}
    code, env = call_json("extension", write(doc))
    assert code == 1 and env["results"]["equivalent"] is False


def test_extension_non_cocycle(write):
    doc = json.loads(data("dual_numbers_ext.json").read_text())
    doc["cocycle"] = {"degree": 2, "parts": [[[0, 0, 0, 1]], []]}
    del doc["compare"]
    code, env = call_json("extension", write(doc))
    assert code == 1 and env["witnesses"]


def test_ext_classes():
    code, env = call_json("ext-classes", data("zero_dim1.json"), "--module", "adjoint")
    r = env["results"]
    assert code == 0 and r["dim_H2c"] == 2 and len(r["representatives"]) == 2
    assert r["pairwise_inequivalent"] is True and r["none_split"] is True


def test_ext_classes_rigid(write):
    code, env = call_json("ext-classes", write(RIGID), "--module", "adjoint")
    assert code == 0 and env["results"]["dim_H2c"] == 0


# -- envelope ----------------------------------------------------------------------------

def test_json_envelope_records_inputs():
    code, env = call_json("cohomology", data("zero_dim1.json"), "--module", "adjoint", "--degree", 2)
    assert env["command"] == "cohomology"
    assert env["inputs"]["degree"] == 2 and env["inputs"]["module"] == "adjoint"


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "homdefo.cli", "verify",
                           str(data("dual_numbers.json"))], capture_output=True, text=True)
    assert proc.returncode == 0 and "ok: True" in proc.stdout


def test_exit_codes_are_deterministic():
    runs = {call("cohomology", data("dual_numbers.json"), "--module", "adjoint")[1] for _ in range(3)}
    assert len(runs) == 1
