import json

import pytest

from regasym import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_stirling_plain(capsys):
    code, out, _ = run(["stirling", "--r", "3"], capsys)
    assert code == 0
    assert out == "1, 1/12, 1/288, -139/51840\n"


def test_stirling_small_orders(capsys):
    assert run(["stirling", "--r", "0"], capsys)[1] == "1\n"
    assert run(["stirling", "--r", "1"], capsys)[1] == "1, 1/12\n"


def test_expand_sg_plain(capsys):
    code, out, _ = run(["expand", "sg", "--k", "3", "--order", "2", "--format", "plain"], capsys)
    assert code == 0
    assert out == "2, -71/18, -143/1296\n"


def test_expand_sg_k2_order0(capsys):
    code, out, _ = run(["expand", "sg", "--k", "2", "--order", "0"], capsys)
    assert code == 0
    assert out == "2\n"


def test_expand_csg_plain(capsys):
    code, out, _ = run(["expand", "csg", "--k", "3", "--order", "2"], capsys)
    assert code == 0
    assert out.strip().endswith("-335/1296")


def test_expand_csg_json_gap(capsys):
    code, out, _ = run(
        ["expand", "csg", "--k", "3", "--order", "2", "--format", "json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["gap_valuation"] == 2
    assert doc["terms"][2]["coefficient"] == "-335/1296"


def test_expand_csv_format(capsys):
    code, out, _ = run(["expand", "sg", "--k", "4", "--order", "1", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines() == ["k,r,coefficient", "4,0,2", "4,1,-235/24"]


def test_formal_k_json(capsys):
    code, out, _ = run(["formal-k", "--r", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc == {
        "r": 1,
        "poly": ["1/6", "-1/2", "1/3", "0", "-1/6"],
        "denom_power": 1,
    }


def test_formal_k_r0(capsys):
    code, out, _ = run(["formal-k", "--r", "0"], capsys)
    assert code == 0
    assert json.loads(out)["poly"] == ["2"]


def test_count_examples(capsys):
    assert run(["count", "--k", "3", "--n", "4"], capsys)[1] == "1 formula\n"
    assert run(["count", "--k", "1", "--n", "6"], capsys)[1] == "15 formula\n"
    assert run(["count", "--k", "3", "--n", "6"], capsys)[1] == "70 formula\n"


def test_count_brute_method(capsys):
    code, out, _ = run(["count", "--k", "2", "--n", "5", "--method", "brute"], capsys)
    assert code == 0
    assert out == "12 brute\n"


def test_count_cache_round_trip(tmp_path, capsys):
    cache = tmp_path / "cache"
    argv = ["--cache-dir", str(cache), "count", "--k", "3", "--n", "6"]
    assert run(argv, capsys)[1] == "70 formula\n"
    assert (cache / cli.CACHE_FILENAME).read_text().strip() == "3 6 70 formula"
    # second run reads the cache
    assert run(argv, capsys)[1] == "70 formula\n"


def test_cache_dir_env_var_and_flag_precedence(tmp_path, capsys, monkeypatch):
    env_cache = tmp_path / "env"
    flag_cache = tmp_path / "flag"
    monkeypatch.setenv(cli.ENV_CACHE_DIR, str(env_cache))
    run(["count", "--k", "3", "--n", "4"], capsys)
    assert (env_cache / cli.CACHE_FILENAME).exists()
    run(["--cache-dir", str(flag_cache), "count", "--k", "2", "--n", "6"], capsys)
    assert (flag_cache / cli.CACHE_FILENAME).exists()
    assert "2 6" not in (env_cache / cli.CACHE_FILENAME).read_text()


def test_validate_sg_row(capsys):
    code, out, err = run(
        ["validate", "--which", "sg", "--k", "3,4", "--n", "10:100:10", "--r", "3"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,10,20,30,40,50,60,70,80,90,100"
    assert lines[1] == "3,5.04,4.05,3.79,3.66,3.60,3.55,3.52,3.50,3.48,3.46"
    assert lines[2].startswith("4,17.93,15.37")


def test_validate_known_published_anomaly(capsys):
    # the published plain grid has one cell no exact count reproduces
    code, out, err = run(
        ["validate", "--which", "sg", "--k", "5", "--n", "10:100:10", "--r", "3"],
        capsys,
    )
    assert code == cli.EXIT_GOLDEN_MISMATCH
    assert "k=5, n=10" in err
    assert "2.13" in err and "2.16" in err


def test_validate_csg(capsys):
    code, out, _ = run(
        ["validate", "--which", "csg", "--k", "3,4", "--n", "10:100:10", "--r", "3"],
        capsys,
    )
    assert code == 0
    assert out.strip().splitlines()[1].endswith("2.31")


def test_validate_empty_range(capsys):
    code, out, _ = run(["validate", "--which", "sg", "--k", "3", "--n", "", "--r", "3"], capsys)
    assert code == 0
    assert out == "n\n"


def test_corrupt_counts_trip_internal_alarm(tmp_path, capsys):
    # a zeroed count for the complete graph kills the z^2 correction, so the
    # expansion-gap check must fire and map to the internal-assertion exit
    src = (cli.counts.DATA_DIR / "sg_k3.txt").read_text().splitlines()
    lines = ["0 1" if line == "0 1" else line for line in src]
    lines = [("4 0" if line.startswith("4 ") else line) for line in lines]
    (tmp_path / "sg_k3.txt").write_text("\n".join(lines) + "\n")
    code, _, err = run(
        ["--data-dir", str(tmp_path), "expand", "csg", "--k", "3", "--order", "2"],
        capsys,
    )
    assert code == cli.EXIT_INTERNAL
    assert "internal assertion failed" in err


def test_unknown_flag_is_usage_error(capsys):
    assert run(["stirling", "--r", "2", "--bogus"], capsys)[0] == 2
    assert run(["expand", "sg", "--k", "3"], capsys)[0] == 2  # missing --order
    assert run(["nonsense"], capsys)[0] == 2


def test_bad_values_are_usage_errors(capsys):
    code, _, err = run(["expand", "sg", "--k", "1", "--order", "2"], capsys)
    assert code == 2 and "k >= 2" in err
    code, _, err = run(["expand", "csg", "--k", "2", "--order", "1"], capsys)
    assert code == 2


def test_help_mentions_defaults(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.build_parser().parse_args(["count", "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "--method" in out and "default auto" in out


def test_determinism(capsys):
    a = run(["expand", "sg", "--k", "5", "--order", "2", "--format", "json"], capsys)
    b = run(["expand", "sg", "--k", "5", "--order", "2", "--format", "json"], capsys)
    assert a == b


def test_parse_int_list():
    assert cli.parse_int_list("10:100:10") == tuple(range(10, 101, 10))
    assert cli.parse_int_list("3,5,9") == (3, 5, 9)
    assert cli.parse_int_list("7") == (7,)
    assert cli.parse_int_list("") == ()
    assert cli.parse_int_list("4:6") == (4, 5, 6)
    with pytest.raises(ValueError):
        cli.parse_int_list("1:10:0")
