import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from omegamodal.cli import main
from omegamodal.formats import algebra_to_json, frame_to_json, relations_to_json, write_json
from omegamodal.algebra import ModalAlgebra, identity_algebra
from omegamodal.frames import kripke_frame
from omegamodal.proofs import dump_proof, generate_mhformula_proof, proof_to_json


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}

    def put(name, doc):
        path = tmp_path / name
        write_json(doc, path)
        paths[name] = str(path)
        return str(path)

    put("kripke.json", frame_to_json(kripke_frame(2, [(0, 1), (1, 1)])))
    put("loop.json", relations_to_json(1, {"box": [(0, 0)]}))
    put("chain.json", relations_to_json(3, {"box": [(0, 1), (1, 2), (0, 2)]}))
    put("id2.json", algebra_to_json(identity_algebra(2)))
    put("nonmt.json", algebra_to_json(ModalAlgebra(2, {"box": (0, 0b11, 0, 0b01)})))
    put("big.json", relations_to_json(6, {"box": [(i, (i + 1) % 6) for i in range(6)]}))
    paths["dir"] = tmp_path
    return paths


def test_parse_ok():
    code, text = run("parse", "[C] p -> [E][C] p")
    assert code == 0 and "Box C" in text


def test_parse_error():
    code, text = run("parse", "forall .")
    assert code == 2 and "column 8" in text


def test_parse_missing_argument(capsys):
    assert run("parse")[0] == 64
    assert "usage" in capsys.readouterr().err


def test_no_command():
    assert run()[0] == 64


def test_bad_bound():
    assert run("parse", "p", "--max-domain", "0")[0] == 64


def test_frame_check(files):
    code, text = run("frame", "check", files["kripke.json"], "--props", "mt,tp,cf,kripke")
    assert code == 0 and text.count("True") == 4
    assert run("frame", "check", files["loop.json"], "--props", "gl")[0] == 1
    assert run("frame", "check", files["chain.json"], "--props", "gl")[0] == 0
    assert run("frame", "check", "/nonexistent.json")[0] == 65
    assert run("frame", "check", files["kripke.json"], "--props", "bogus")[0] == 64
    assert run("frame", "check", files["kripke.json"], "--modality", "E")[0] == 64


def test_algebra_check(files):
    assert run("algebra", "check", files["id2.json"], "--props", "mt,tp,cf,multiplicative")[0] == 0
    code, text = run("algebra", "check", files["nonmt.json"], "--props", "mt")
    assert code == 1 and "False" in text


def test_complex_writes_algebra(files):
    out = files["dir"] / "alg.json"
    assert run("complex", files["kripke.json"], "-o", str(out))[0] == 0
    assert json.loads(out.read_text())["box"]["box"] == [0, 0, 3, 3]
    code, text = run("complex", files["kripke.json"])
    assert json.loads(text)["atoms"] == 2


def test_qfilter_identity(files):
    out = files["dir"] / "q.json"
    code, text = run("qfilter", files["id2.json"], "-o", str(out))
    assert code == 0 and "embedding injective: True" in text
    assert json.loads(out.read_text())["worlds"] == 2


def test_qfilter_non_mt_is_not_applicable(files):
    code, text = run("qfilter", files["nonmt.json"])
    assert "box mt preserved: not-applicable" in text
    assert code == 0


def test_qfilter_deterministic(files, tmp_path):
    import random
    from omegamodal.algebra import random_algebra

    path = tmp_path / "r.json"
    write_json(algebra_to_json(random_algebra(random.Random(5), 3)), path)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("qfilter", str(path), "-o", str(a))
    run("qfilter", str(path), "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_qfilter_bad_file(files):
    bad = files["dir"] / "bad.json"
    bad.write_text('{"atoms": 1, "box": {"box": [0]}}')
    assert run("qfilter", str(bad))[0] == 65
    trivial = files["dir"] / "trivial.json"
    trivial.write_text('{"atoms": 0, "box": {"box": [0]}}')
    assert run("qfilter", str(trivial))[0] == 65


def test_validate(files):
    assert run("validate", files["kripke.json"], "[]p -> [][]p")[0] == 0
    code, text = run("validate", files["kripke.json"], "[]p -> p")
    assert code == 1 and "countermodel" in text
    assert run("validate", files["kripke.json"], "forall x. []P(x) -> [][]P(x)")[0] == 3
    assert run("validate", files["kripke.json"], "[]p ->")[0] == 2


def test_duality_bundled():
    code, text = run("duality")
    assert code == 0 and text.strip().endswith("50 formulas, 0 disagreements")


def test_duality_random_is_deterministic(files):
    a = run("duality", files["kripke.json"], "--random", "30", "--seed", "0", "--format", "jsonl")
    b = run("duality", files["kripke.json"], "--random", "30", "--seed", "0", "--format", "jsonl")
    assert a == b and a[0] == 0
    records = [json.loads(line) for line in a[1].splitlines()]
    assert records[-1] == {"disagreements": 0, "formulas": 30}


def test_duality_corpus_file(files):
    corpus = files["dir"] / "c.txt"
    corpus.write_text("[]p -> p\n")
    code, text = run("duality", files["kripke.json"], "--corpus", str(corpus))
    assert code == 0 and "1 formulas" in text
    assert run("duality", files["kripke.json"], "--corpus", str(corpus) + "x")[0] == 65


def test_duality_budget(files):
    assert run("duality", files["big.json"])[0] == 70


def test_gl_check(files):
    code, text = run("gl-check", "--max-worlds", "3")
    assert code == 0 and "3 worlds: 19/19" in text and "reflexive point passes: False" in text
    assert run("gl-check", files["loop.json"])[0] == 1
    assert run("gl-check", files["chain.json"])[0] == 0


def test_ckl_demo():
    code, text = run("ckl-demo", "--samples", "100")
    assert code == 0
    assert "C x   = 0 on [0,w), 1 on [w,w+w)" in text
    assert "Cp -> ECp FAILS at alpha = w" in text
    assert run("ckl-demo", "--samples", "100") == (code, text)


def test_ckl_demo_without_samples():
    code, text = run("ckl-demo", "--samples", "0")
    assert code == 0 and "laws" not in text


def test_prove_check_builtin():
    code, text = run("prove", "check", "PS_QCKL⁻")
    assert code == 3 and text.strip().endswith("CheckedToBound(8)")


def test_prove_check_unknown_system():
    assert run("prove", "check", "PS_K")[0] == 64


def test_prove_check_files(files):
    taut = files["dir"] / "t.json"
    write_json({"steps": [{"formula": "p -> p", "by": {"rule": "axiom", "schema": "taut"}}]}, taut)
    assert run("prove", "check", "PS_QGL", str(taut))[0] == 0
    doc = proof_to_json(generate_mhformula_proof())
    doc["steps"][2]["by"]["implication"] = 7
    bad = files["dir"] / "bad.json"
    write_json(doc, bad)
    code, text = run("prove", "check", "PS_QCKL-", str(bad))
    assert code == 1 and "Rejected(step 2" in text
    broken = files["dir"] / "broken.json"
    broken.write_text('{"steps": [{"formula": "p ->", "by": {"rule": "axiom", "schema": "taut"}}]}')
    assert run("prove", "check", "PS_QGL", str(broken))[0] == 65


def test_prove_check_jsonl(files):
    path = files["dir"] / "mh.json"
    dump_proof(generate_mhformula_proof(), path)
    code, text = run("prove", "check", "PS_QCKL-", str(path), "--format", "jsonl", "--omega-bound", "3")
    assert code == 3
    assert json.loads(text.splitlines()[-1]) == {"status": "CheckedToBound(3)"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "omegamodal.cli", "parse", "p & q"], capture_output=True, text=True)
    assert proc.returncode == 0 and "And" in proc.stdout


GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize(
    "argv, name",
    [(("ckl-demo", "--samples", "100"), "ckl_demo.jsonl"), (("duality",), "duality_frame3.jsonl")],
)
def test_golden_records(argv, name):
    code, text = run(*argv, "--format", "jsonl")
    assert code == 0
    assert text == (GOLDEN / name).read_text(encoding="utf-8")
