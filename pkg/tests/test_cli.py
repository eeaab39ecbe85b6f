import pytest

from approxagg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_agenda_show_conjunction(capsys):
    code, out = run(capsys, "agenda", "show", "--kind", "conjunction", "--premises", "2")
    assert code == 0
    assert out.splitlines() == ["m=3", "000", "010", "100", "111"]


def test_agenda_show_spec_string(capsys):
    code, out = run(capsys, "agenda", "show", "--agenda", "id:2")
    assert code == 0
    assert out.splitlines() == ["m=2", "00", "11"]


def test_indices_ic_exact(capsys):
    code, out = run(capsys, "indices", "ic", "--agenda", "conjunction:2",
                    "--mech", "systematic:maj", "--voters", "3", "--mode", "exact")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("mechanism,agenda,index")
    cells = lines[1].split(",")
    assert cells[2] == "ic" and cells[5] == "3" and cells[6] == "5"  # 3/32


def test_indices_di_max(capsys):
    code, out = run(capsys, "indices", "di", "--agenda", "conjunction:2",
                    "--mech", "systematic:maj", "--voters", "3")
    assert code == 0
    cells = out.splitlines()[1].split(",")
    assert cells[5] == "0"


def test_indices_mc_requires_seed(capsys):
    with pytest.raises(SystemExit) as e:
        main(["indices", "ic", "--agenda", "conjunction:2", "--mech",
              "systematic:maj", "--voters", "3", "--mode", "mc"])
    assert e.value.code == 2


def test_oracle_verify(capsys):
    code, out = run(capsys, "oracle", "verify", "--agenda", "xor:2", "--voters", "2")
    assert code == 0
    assert out.strip() == "true 16"
    code, out = run(capsys, "oracle", "verify", "--agenda", "conjunction:2",
                    "--voters", "2")
    assert out.strip() == "true 35"


def test_oracle_enumerate_and_nearest(capsys):
    code, out = run(capsys, "oracle", "enumerate", "--agenda", "id:2", "--voters", "1")
    assert code == 0
    assert out.splitlines()[0] == "family agenda=id:2 n=1 count=4"
    code, out = run(capsys, "oracle", "nearest", "--agenda", "conjunction:2",
                    "--voters", "3", "--mech", "systematic:maj")
    assert code == 0
    cells = out.splitlines()[1].split(",")
    assert cells[-2:] == ["7", "4"]  # distance 7/16


def test_verify_mand_single(capsys):
    code, out = run(capsys, "verify", "mand", "--mech", "systematic:maj",
                    "--premises", "2", "--voters", "3", "--strict")
    assert code == 0
    assert out.splitlines()[1].split(",")[11] == "vacuous"


def test_verify_mxor_single(capsys):
    code, out = run(capsys, "verify", "mxor", "--mech", "linear:3:000",
                    "--issues", "3", "--voters", "2", "--strict")
    assert code == 0
    assert out.splitlines()[1].split(",")[11] == "satisfied"


def test_verify_boundpi(capsys):
    code, out = run(capsys, "verify", "boundpi", "--fns", "maj,maj",
                    "--voters", "3", "--voter", "1", "--k", "1", "--l", "2")
    assert code == 0
    assert out.splitlines()[1].split(",")[11] == "satisfied"


def test_verify_junta_guard(capsys):
    code, out = run(capsys, "verify", "junta", "--fns", "maj,maj", "--voters", "3",
                    "--delta", "1/4", "--epsilon-frac", "1/2")
    assert code == 0
    assert out.splitlines()[1].split(",")[11] == "not-applicable"


def test_blr_command(capsys):
    code, out = run(capsys, "blr", "--fns", "xor:5,xor:5,xor:5", "--voters", "3")
    assert code == 0
    assert out.splitlines()[1].split(",")[11] == "satisfied"


def test_spectrum_command(capsys):
    code, out = run(capsys, "spectrum", "--fn", "dict:1", "--voters", "2")
    assert code == 0
    assert out.splitlines() == ["mask,numerator,log2_denominator",
                                "0,0,0", "1,1,0", "2,0,0", "3,0,0"]


def test_usage_error_bad_spec(capsys):
    with pytest.raises(SystemExit) as e:
        main(["indices", "ic", "--agenda", "nonsense:9", "--mech",
              "systematic:maj", "--voters", "2"])
    assert e.value.code == 2


def test_output_file_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["indices", "ic", "--agenda", "conjunction:2", "--mech", "systematic:maj",
            "--voters", "3", "--mode", "mc", "--samples", "2000", "--seed", "42"]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_workers_identical_output(capsys):
    code1, out1 = run(capsys, "verify", "mand", "--sweep", "--premises", "1",
                      "--voters", "1", "--workers", "1")
    code2, out2 = run(capsys, "verify", "mand", "--sweep", "--premises", "1",
                      "--voters", "1", "--workers", "3")
    assert (code1, out1) == (code2, out2)


def test_mechanism_file_round_trip(tmp_path, capsys):
    from approxagg.mechanism import maj_mechanism

    path = tmp_path / "mech.txt"
    path.write_text(maj_mechanism(3, 3).serialize() + "\n", encoding="utf-8")
    code, out = run(capsys, "indices", "ic", "--agenda", "conjunction:2",
                    "--mech", f"@{path}", "--voters", "3")
    assert code == 0
    assert out.splitlines()[1].split(",")[5:7] == ["3", "5"]


def test_affine_agenda_file(tmp_path, capsys):
    path = tmp_path / "affine.txt"
    path.write_text("m=3 shift=000\n111\n", encoding="utf-8")
    code, out = run(capsys, "agenda", "show", "--agenda", f"affine:@{path}")
    assert code == 0
    assert out.splitlines() == ["m=3", "000", "011", "101", "110"]
