import json
import subprocess
import sys

import jsonschema
import pytest

from conftest import SCENES
from reebcert.cli import main, run
from reebcert.complex import theorem1_verdict, universal_quotient
from reebcert.errors import SceneParseError, ValidationError
from reebcert.generators import GENERATORS, fig3_round_fold, random_scene
from reebcert.scene import emit_scene, load_schema, parse_classifier, parse_scene, scene_to_json


def fixture_text(name):
    return (SCENES / name).read_text()


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_shipped_fig3_round_trip():
    text = fixture_text("fig3.json")
    s = parse_scene(text)
    ref = fig3_round_fold()
    assert s.complex == ref.complex and s.registry == ref.registry
    assert emit_scene(s) == text


def test_round_trip_random():
    for seed in range(40):
        s = random_scene(seed)
        t = parse_scene(emit_scene(s))
        assert json.loads(emit_scene(t)) == scene_to_json(s)


def test_truncated_file_reports_location():
    text = fixture_text("fig3.json")
    with pytest.raises(SceneParseError) as info:
        parse_scene(text[: len(text) // 2])
    assert info.value.location.startswith("line ")
    assert "line" in str(info.value)


def test_unknown_type_id_named():
    data = json.loads(fixture_text("fig3.json"))
    data["labels"]["D1"] = "Ghost"
    with pytest.raises(ValidationError) as info:
        parse_scene(json.dumps(data))
    assert "Ghost" in str(info.value)


def test_unknown_key_rejected():
    data = json.loads(fixture_text("fig3.json"))
    data["labelz"] = {}
    with pytest.raises(SceneParseError) as info:
        parse_scene(json.dumps(data))
    assert "labelz" in str(info.value)
    data = json.loads(fixture_text("fig3.json"))
    data["fiber_types"][0]["colour"] = "red"
    with pytest.raises(SceneParseError) as info:
        parse_scene(json.dumps(data))
    assert info.value.location == "$.fiber_types[0]"


def test_big_integers_as_strings():
    data = json.loads(fixture_text("fig3.json"))
    big = 2 ** 60
    data["extra_relations"] = [[[str(big), "S"], [1, "Sigma"]]]
    s = parse_scene(json.dumps(data))
    assert s.extra_relations == (((big, "S"), (1, "Sigma")),)
    out = json.loads(emit_scene(s))
    assert out["extra_relations"][0][0][0] == str(big)


def test_classifier_file():
    cl = parse_classifier(fixture_text("classifier_bad.json"))
    assert cl.assignment == {"S": (1,), "Sigma": (0,)}
    with pytest.raises(SceneParseError):
        parse_classifier('{"group": {"free_rank": 0}}')


def test_check_fig3(capsys):
    code, out, _ = cli(capsys, "--json", "check", str(SCENES / "fig3.json"))
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"]["status"] == "nonvanishing"
    assert rep["module"]["torsion"] == [2]


def test_check_identified(capsys):
    code, out, _ = cli(capsys, "--json", "check", str(SCENES / "fig3_identified.json"))
    assert code == 0 and json.loads(out)["verdict"]["status"] == "inconclusive"


def test_check_bad_classifier(capsys):
    code, out, _ = cli(capsys, "--json", "check", str(SCENES / "fig3.json"),
                       "--classifier", str(SCENES / "classifier_bad.json"))
    rep = json.loads(out)
    assert code == 3
    assert rep["classifier"]["offending"]["vector"] == [1, 0]
    assert rep["classifier"]["offending"]["text"] == "e[S]"


def test_check_sphere_classifier(capsys):
    code, out, _ = cli(capsys, "--json", "check", str(SCENES / "fig3.json"),
                       "--classifier", str(SCENES / "classifier_sphere.json"))
    rep = json.loads(out)
    assert code == 0 and rep["verdict"]["source"] == "classifier"
    assert rep["verdict"]["nonvanishing"]


def test_validation_failure_exit_2(capsys, tmp_path):
    data = json.loads(fixture_text("fig3.json"))
    del data["labels"]["A"]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    for cmd in ("validate", "check", "module"):
        code, out, _ = cli(capsys, "--json", cmd, str(p))
        rep = json.loads(out)
        assert code == 2
        assert rep["validation"][0]["code"] == "unlabeled"
    p.write_text("{")
    code, out, _ = cli(capsys, "check", str(p))
    assert code == 2 and "line 1" in out


def test_usage_errors_exit_4(capsys):
    assert cli(capsys, "frobnicate")[0] == 4
    assert cli(capsys)[0] == 4
    assert cli(capsys, "check")[0] == 4
    assert cli(capsys, "check", "/nonexistent/scene.json")[0] == 4
    assert cli(capsys, "homology", str(SCENES / "fig3.json"), "--ring", "q")[0] == 4
    assert cli(capsys, "generate", "thm4", "--g", "4")[0] == 4
    assert cli(capsys, "spin", str(SCENES / "thm5.json"))[0] == 4


def test_relations_modes(capsys):
    code, out, _ = cli(capsys, "--json", "relations", str(SCENES / "fig1.json"),
                       "--mode", "visibility")
    rep = json.loads(out)
    assert code == 0 and len(rep["relations"]) == 2


def test_homology_command(capsys):
    code, out, _ = cli(capsys, "--json", "homology", str(SCENES / "fig3.json"))
    rep = json.loads(out)
    assert code == 0
    assert [(h["free_rank"], h["torsion"]) for h in rep["homology"]] == [(1, []), (0, []), (1, [])]
    assert rep["top_homology"]["canonical_generates"]


def test_reports_match_schema(capsys):
    schema = load_schema("report")
    for argv in (["check", str(SCENES / "fig3.json")],
                 ["check", str(SCENES / "fig3.json"), "--classifier",
                  str(SCENES / "classifier_bad.json")],
                 ["module", str(SCENES / "thm5.json")],
                 ["homology", str(SCENES / "fig7.json"), "--ring", "z2"],
                 ["validate", str(SCENES / "fig1.json")],
                 ["bogus"]):
        code, out, _ = cli(capsys, "--json", *argv)
        jsonschema.validate(json.loads(out), schema)


def test_reports_deterministic(capsys):
    argv = ["check", str(SCENES / "thm5.json")]
    a = cli(capsys, *argv)[1]
    b = cli(capsys, *argv)[1]
    assert a == b
    assert cli(capsys, "--json", *argv)[1] == cli(capsys, "--json", *argv)[1]


def test_human_carries_json_data(capsys):
    argv = ["check", str(SCENES / "fig3.json")]
    rep = json.loads(cli(capsys, "--json", *argv)[1])
    text = cli(capsys, *argv)[1]
    assert rep["verdict"]["status"] in text
    assert rep["module"]["description"] in text
    for r in rep["relations"]:
        assert r["text"] in text


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_generate_then_check_fidelity(capsys, tmp_path, name):
    out = tmp_path / f"{name}.json"
    assert cli(capsys, "generate", name, "-o", str(out))[0] == 0
    s = GENERATORS[name]()
    assert parse_scene(out.read_text()).complex == s.complex
    code, text, _ = cli(capsys, "--json", "check", str(out))
    rep = json.loads(text)
    if s.classifier is None:
        q = universal_quotient(s.complex, s.registry, s.ring, s.extra_vectors())
        v = theorem1_verdict(s.complex, s.registry, q)
        assert rep["verdict"]["status"] == v.status
        assert rep["module"]["torsion"] == list(q.torsion_factors)
    else:
        assert code in (0, 3)


def test_generate_to_stdout_and_spin(capsys, tmp_path):
    code, out, err = cli(capsys, "generate", "fig7-profile")
    assert code == 0 and "wrote" not in out
    prof = tmp_path / "p.json"
    prof.write_text(out)
    spun = tmp_path / "s.json"
    assert cli(capsys, "spin", str(prof), "-o", str(spun))[0] == 0
    rep = json.loads(cli(capsys, "--json", "check", str(spun))[1])
    assert rep["verdict"]["status"] == "nonvanishing"
    assert emit_scene(parse_scene(spun.read_text())) == fixture_text("fig7.json")


def test_stdin_and_module_entry_point():
    text = fixture_text("fig3.json")
    proc = subprocess.run([sys.executable, "-m", "reebcert", "--json", "check", "-"],
                          input=text, capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"]["witness_cell"] in ("D1", "D2")


def test_run_returns_report():
    code, rep = run(["module", str(SCENES / "fig3.json")])
    assert code == 0 and rep["module"]["torsion"] == [2]
