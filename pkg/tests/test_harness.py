import copy
import csv
import io
import json
import math
from fractions import Fraction

import pytest

from duel import evasion, martingale
from duel.errors import MissingColumns, UndecidableComparison
from duel.harness import (
    EXIT_INPUT,
    EXIT_INVARIANT,
    EXIT_OK,
    Scenario,
    builtin_scenarios,
    emit_plot_script,
    execute,
    run_scenario,
)

F = Fraction
BUILTINS = {b["name"]: b for b in builtin_scenarios()}


def builtin(name, **over):
    sc = copy.deepcopy(BUILTINS[name]["scenario"])
    sc.update(over)
    return sc


def read_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return rows


def test_builtin_catalogue():
    assert len(BUILTINS) >= 7
    assert BUILTINS["evens-vs-odds"]["scenario"]["mode"] == "evade-wellordered"
    rp = BUILTINS["rplus-vs-unit-interval"]["scenario"]
    assert rp["mode"] == "dominate" and rp["f"] == {"kind": "minReciprocal"}
    for b in BUILTINS.values():
        assert b["description"] and b["expect"]
        Scenario.from_json(b["scenario"])


def test_run_writes_artifacts(tmp_path):
    st = run_scenario("intro-1-2-vs-1", tmp_path)
    assert st.code == EXIT_OK
    assert {p.name for p in tmp_path.iterdir()} == {"trajectory.csv", "metadata.json", "summary.json"}
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["home"]["success"] is True
    assert summary["opponents"][0]["success"] is False
    rows = (tmp_path / "trajectory.csv").read_text().splitlines()
    assert len(rows) == 10000 + 2


def test_check_scaling_mode(tmp_path):
    sc = {
        "mode": "check-scaling",
        "a": {"kind": "finite", "values": ["1", "pi"]},
        "b": {"kind": "integer_multiples", "step": "1"},
    }
    assert run_scenario(sc, tmp_path).code == EXIT_OK
    assert json.loads((tmp_path / "summary.json").read_text()) == {"scales": "No"}
    assert not (tmp_path / "trajectory.csv").exists()
    assert "lattice" in json.loads((tmp_path / "metadata.json").read_text())["reason"]


def test_malformed_json_is_an_input_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"mode": "simulate", "a": ')
    st = run_scenario(p, tmp_path / "out")
    assert st.code == EXIT_INPUT and "malformed JSON" in st.message


@pytest.mark.parametrize(
    "obj, needle",
    [
        ({"mode": "teleport"}, "'mode'"),
        ({"mode": "dominate", "a": {"kind": "half_line", "lo": "0"}}, "'b'"),
        (dict(builtin("intro-1-2-vs-1"), horizon=0), "'horizon'"),
        (dict(builtin("intro-1-2-vs-1"), a={"kind": "finite", "values": ["x"]}), "'a'"),
        (dict(builtin("dyadic-powers"), f={"kind": "exp"}), "'f'"),
    ],
)
def test_bad_fields_are_named(tmp_path, obj, needle):
    st = run_scenario(obj, tmp_path)
    assert st.code == EXIT_INPUT
    assert needle in st.message


def test_invariant_trap_exits_two(tmp_path, monkeypatch):
    # a casino that picks the ratio-raising side must trip the monotonicity trap
    real = evasion.ratio_min_case

    def wrong(nv, mv, ni, mi):
        x, case = real(nv, mv, ni, mi)
        return (martingale.T if x is martingale.H else martingale.H), case

    monkeypatch.setattr(evasion, "ratio_min_case", wrong)
    sc = {
        "mode": "ratio-min",
        "a": {"kind": "harmonic_shifted"},
        "n": {"kind": "alwaysHeads", "w": "1", "initial": "10"},
        "horizon": 50,
    }
    st = run_scenario(sc, tmp_path)
    assert st.code == EXIT_INVARIANT and "MonotonicityViolation" in st.message


def test_undecidable_comparison_names_the_step(tmp_path, monkeypatch):
    real = martingale.MartingaleRun.step

    def step(self, x, bets=None):
        if self.t == 7:
            raise UndecidableComparison("enclosures overlap at the cap")
        return real(self, x, bets)

    monkeypatch.setattr(martingale.MartingaleRun, "step", step)
    st = run_scenario(builtin("intro-1-2-vs-1", horizon=20), tmp_path)
    assert st.code == EXIT_INPUT and "t=7" in st.message


def test_empty_opponents_bounded():
    sc = {
        "mode": "evade-bounded",
        "a": {"kind": "harmonic_shifted"},
        "b": {"kind": "integer_multiples", "step": "1"},
        "horizon": 300,
    }
    out = execute(sc)
    ms = [F(r["m"]) for r in read_csv(out.csv_text)]
    assert all(b > a for a, b in zip(ms, ms[1:]))
    assert out.summary["stabilization"]["last_active"] == []


def test_metadata_round_trip():
    sc = builtin("dyadic-powers", horizon=200)
    out = execute(sc)
    meta = out.metadata["scenario"]
    # defaults are written out explicitly
    assert set(sc) <= set(meta) and meta["casino"] == sc["casino"]
    again = execute(meta)
    assert again.csv_text == out.csv_text and again.summary == out.summary
    assert again.metadata["scenario"] == meta


def test_defaults_are_materialised():
    meta = execute({"mode": "validate", "a": {"kind": "finite", "values": ["1"]},
                    "strategy": {"kind": "alwaysHeads", "w": "1", "initial": "3"}, "depth": 3}).metadata
    assert meta["scenario"]["name"] == "validate"
    meta = execute(builtin("reciprocals-vs-V", horizon=50)).metadata
    assert meta["scenario"]["thresholds"] == {"home_gain": "50"}
    assert meta["scenario"]["window_fraction"] == "1/5"


@pytest.mark.parametrize("name, horizon", [("intro-1-2-vs-1", 3000), ("reciprocals-vs-V", 3000), ("evens-vs-odds", 3000)])
def test_reruns_are_byte_identical(tmp_path, name, horizon):
    sc = builtin(name, horizon=horizon)
    run_scenario(sc, tmp_path / "a")
    run_scenario(sc, tmp_path / "b")
    for f in ("trajectory.csv", "summary.json", "metadata.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


# independent reader: recompute summary flags from CSV rows alone


def reread_simulate(text, horizon, home_gain, opp_gain, window_fraction=F(1, 5)):
    rows = read_csv(text)
    start = horizon - math.floor(horizon * window_fraction)
    m = [F(r["m"]) for r in rows]
    ns = [[F(r[c]) for r in rows] for c in rows[0] if c.startswith("n_")]
    opps = []
    for n in ns:
        active = any(n[t + 1] != n[t] for t in range(start, horizon))
        opps.append({"success": n[-1] >= n[0] + opp_gain, "active_in_final_window": active})
    return m[-1] >= m[0] + home_gain, opps


def test_simulate_summary_matches_independent_reader():
    sc = builtin("intro-1-2-vs-1")
    out = execute(sc)
    home, opps = reread_simulate(out.csv_text, 10000, 100, 4)
    assert out.summary["home"]["success"] == home
    for mine, theirs in zip(out.summary["opponents"], opps):
        assert mine["success"] == theirs["success"]
        assert mine["active_in_final_window"] == theirs["active_in_final_window"]


@pytest.mark.parametrize("name, key", [("harmonic-shifted-vs-integers", "k"), ("evens-vs-odds", "p")])
def test_casino_summary_matches_independent_reader(name, key):
    horizon = 4000
    out = execute(builtin(name, horizon=horizon))
    rows = read_csv(out.csv_text)
    assert len(rows) == horizon + 1
    start = horizon - horizon // 5
    m = [F(r["m"]) for r in rows]
    gain = 50 if key == "k" else 25
    assert out.summary["home_success"] == (m[-1] >= m[0] + gain)
    cols = [c for c in rows[0] if c.startswith("n_")]
    last = []
    for c in cols:
        n = [F(r[c]) for r in rows]
        moves = [t + 1 for t in range(horizon) if n[t + 1] != n[t]]
        last.append(moves[-1] if moves else 0)
    assert out.summary["stabilization"]["last_active"] == last
    assert out.summary["stabilization"]["stabilized"] == [x <= start for x in last]
    assert F(out.summary[f"suffix_min_{key}"]) == min(F(r[key]) for r in rows[start:])
    if key == "p":
        assert out.summary["m_ge_g"] == all(F(r["m"]) >= F(r["g"]) for r in rows)


def test_dominate_summary_matches_independent_reader():
    out = execute(builtin("rplus-vs-unit-interval", horizon=500))
    rows = read_csv(out.csv_text)
    m = [F(r["m"]) for r in rows]
    s = [F(r["s"]) for r in rows]
    assert str(m[-1]) == out.summary["m_final"] and str(s[-1]) == out.summary["s_final"]
    # every shadow wager lies in [0, 1]
    assert all(abs(b - a) <= 1 for a, b in zip(s, s[1:])) == out.summary["s_wagers_in_b_closure"]


def test_density_report_builtin():
    out = execute(builtin("sieve-density-one"))
    assert out.csv_text is None
    s = out.summary
    assert s["q_cutoff"] == "9" and s["q_cutoff_bound"] == 9
    assert s["b_density"]["1000"] == "99/100"
    assert len(s["q_profile"]) == 100


def test_ratio_min_mode():
    sc = {
        "mode": "ratio-min",
        "a": {"kind": "harmonic_shifted"},
        "n": {"kind": "stopOnBankrupt", "inner": {"kind": "alwaysHeads", "w": "1", "initial": "10"},
              "set": {"kind": "integer_multiples", "step": "1"}},
        "horizon": 1100,
    }
    out = execute(sc)
    rows = read_csv(out.csv_text)
    assert len(rows) == 1101
    ratios = [F(r["n"]) / F(r["m"]) for r in rows]
    assert all(a >= b for a, b in zip(ratios, ratios[1:]))
    assert out.summary["windows"] == [1024] and out.summary["monotone"]


# plot scripts


def test_plot_bounded(tmp_path):
    out = execute(builtin("harmonic-shifted-vs-integers", horizon=50))
    p = tmp_path / "b.csv"
    p.write_text(out.csv_text)
    script = emit_plot_script(p)
    titles = {"m(t)", "n_1(t)", "n_2(t)", "n_3(t)", "n_4(t)"}
    assert all(f"title '{t}'" in script for t in titles)
    assert script.count(" with lines ") == len(titles)
    assert "g(t)" not in script


def test_plot_wellordered_has_g(tmp_path):
    out = execute(builtin("evens-vs-odds", horizon=50))
    p = tmp_path / "w.csv"
    p.write_text(out.csv_text)
    dest = tmp_path / "w.gp"
    script = emit_plot_script(p, dest)
    assert "title 'g(t)'" in script and dest.read_text() == script


@pytest.mark.parametrize("text", ["", "t,m\n", "x,m\n1,2\n", "t,outcome\n0,\n"])
def test_plot_missing_columns(tmp_path, text):
    p = tmp_path / "e.csv"
    p.write_text(text)
    with pytest.raises(MissingColumns):
        emit_plot_script(p)
