"""Scenario files: parse, run, and write trajectory/metadata/summary artifacts.

A scenario is a JSON object with a ``mode`` and mode-specific fields.  The
runner fills every omitted field with its default and records the
completed scenario in ``metadata.json``, so feeding that block back in
reproduces the run exactly.
"""

from __future__ import annotations

import copy
import csv
import io
import json
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import __version__
from .domination import (
    f_shadow,
    integral_bound_check,
    q_cutoff,
    q_profile,
    scaling_from_json,
    sieve_cutoff_bound,
)
from .errors import DuelError, InputError, InvariantViolation, MissingColumns, ScenarioError
from .evasion import (
    BoundedConfig,
    WellOrderedConfig,
    bounded_casino,
    ratio_min_extension,
    stabilization_report,
    two_phase_casino,
    well_ordered_casino,
    windowed_density,
)
from .martingale import H, T, MartingaleRun, RulerMartingale, Strategy, validate_strategy, visit_density
from .values import PRECISION, as_value, format_value, parse_value, set_precision
from .wagerset import Enumeration, IntegerSieve, from_json as set_from_json, scales_into
from .zoo import StopOnBankrupt, opponent_zoo

MODES = (
    "simulate",
    "check-scaling",
    "dominate",
    "evade-bounded",
    "evade-wellordered",
    "ratio-min",
    "validate",
    "density-report",
)

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2

# per-mode defaults; "required" lists fields that have none
_DEFAULTS = {
    "simulate": {
        "required": ["a", "b", "home", "opponents", "horizon"],
        "casino": {"kind": "two-phase", "lead": "3"},
        "thresholds": {"home_gain": "100", "opponent_gain": "100"},
        "window_fraction": "1/5",
    },
    "check-scaling": {"required": ["a", "b"]},
    "dominate": {
        "required": ["a", "b", "m", "f", "horizon"],
        "casino": {"kind": "random", "seed": 0, "p_heads": "1/2"},
    },
    "evade-bounded": {
        "required": ["a", "b", "horizon"],
        "opponents": [],
        "m_initial": None,
        "observe_bets": False,
        "thresholds": {"home_gain": "50"},
        "window_fraction": "1/5",
    },
    "evade-wellordered": {
        "required": ["a", "b", "horizon"],
        "opponents": [],
        "m_initial": "1",
        "observe_bets": False,
        "thresholds": {"home_gain": "25"},
        "window_fraction": "1/5",
    },
    "ratio-min": {
        "required": ["a", "n", "horizon"],
        "m": None,
        "prefix": "",
        "epsilon": "1/10",
        "windows": None,
        "L": None,
    },
    "validate": {"required": ["a", "strategy", "depth"]},
    "density-report": {
        "required": ["a"],
        "b": None,
        "horizon": 65536,
        "epsilon": "1/10",
        "points": 4,
        "mcap": None,
        "xs": None,
        "counts_upto": [1000, 100000],
    },
}


@dataclass
class Scenario:
    name: str
    mode: str
    fields: dict = field(default_factory=dict)
    precision_bits: int | None = None

    @classmethod
    def from_json(cls, obj) -> "Scenario":
        if not isinstance(obj, dict):
            raise ScenarioError("a scenario must be a JSON object")
        mode = obj.get("mode")
        if mode not in MODES:
            raise ScenarioError(f"field 'mode' must be one of {', '.join(MODES)}; got {mode!r}")
        defaults = _DEFAULTS[mode]
        missing = [k for k in defaults["required"] if k not in obj]
        if missing:
            raise ScenarioError(f"mode {mode!r} needs field(s) {', '.join(repr(m) for m in missing)}")
        fields = {k: copy.deepcopy(v) for k, v in defaults.items() if k != "required"}
        for k, v in obj.items():
            if k in ("name", "mode", "precision_bits"):
                continue
            if isinstance(v, dict) and isinstance(fields.get(k), dict) and k != "casino":
                fields[k] = {**fields[k], **v}
            else:
                fields[k] = v
        if "horizon" in fields and fields["horizon"] is not None:
            h = fields["horizon"]
            if not isinstance(h, int) or h < 1:
                raise ScenarioError(f"field 'horizon' must be a positive integer, got {h!r}")
        bits = obj.get("precision_bits")
        if bits is not None and (not isinstance(bits, int) or bits < 16):
            raise ScenarioError("field 'precision_bits' must be an integer >= 16")
        return cls(str(obj.get("name", mode)), mode, fields, bits)

    def to_json(self) -> dict:
        out = {"name": self.name, "mode": self.mode}
        if self.precision_bits is not None:
            out["precision_bits"] = self.precision_bits
        out.update(copy.deepcopy(self.fields))
        return out

    def __getitem__(self, key):
        return self.fields[key]


@dataclass
class Outcome:
    """What a scenario run produced, before anything touches the disk."""

    csv_text: str | None
    summary: dict
    metadata: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _field(sc: Scenario, key, parse=lambda v: v):
    try:
        return parse(sc[key])
    except KeyError:
        raise ScenarioError(f"missing field {key!r}") from None
    except DuelError as exc:
        raise ScenarioError(f"field {key!r}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"field {key!r}: {exc}") from exc


def _strategies(specs) -> list:
    if not isinstance(specs, list):
        raise ScenarioError("field 'opponents' must be a list")
    return [opponent_zoo(s) for s in specs]


def casino_outcomes(spec: dict, horizon: int):
    """Outcome generator for the fixed (non-adaptive) casino kinds."""
    kind = spec.get("kind")
    if kind == "random":
        rng = random.Random(int(spec.get("seed", 0)))
        p = Fraction(as_value(spec.get("p_heads", "1/2")))
        scale = 1 << 30
        cut = math.floor(p * scale)
        return [H if rng.randrange(scale) < cut else T for _ in range(horizon)]
    if kind == "sequence":
        text = spec.get("outcomes", "")
        if not text:
            raise ScenarioError("casino 'sequence' needs a nonempty 'outcomes' string")
        if spec.get("cycle", True):
            text = (text * (horizon // len(text) + 1))[:horizon]
        return [H if c == "H" else T for c in text[:horizon]]
    raise ScenarioError(f"unknown casino kind {kind!r} for this mode")


def _fmt(v):
    return format_value(v) if v is not None else None


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["" if v is None else v if isinstance(v, (int, str)) else format_value(v) for v in r])
    return buf.getvalue()


def _gain_flag(run: MartingaleRun, gain) -> bool:
    return not run.bankrupt and run.value >= run.wealth[0] + as_value(gain)


# ---------------------------------------------------------------------------
# mode runners
# ---------------------------------------------------------------------------


def _run_simulate(sc: Scenario) -> Outcome:
    a, b = _field(sc, "a", set_from_json), _field(sc, "b", set_from_json)
    home = _field(sc, "home", opponent_zoo)
    opps = _field(sc, "opponents", _strategies)
    horizon = sc["horizon"]
    casino = sc["casino"]
    if casino.get("kind") == "two-phase":
        res = two_phase_casino(home, opps, horizon, lead=as_value(casino.get("lead", "3")), b=b)
        csv_text = res.state_log.to_csv()
        home_run, opp_runs = res.m_run, res.opponent_runs
    else:
        xs = casino_outcomes(casino, horizon)
        home_run = MartingaleRun.start(home)
        opp_runs = [MartingaleRun.start(StopOnBankrupt(o, b)) for o in opps]
        rows = []
        for t in range(horizon + 1):
            rows.append([t, xs[t - 1].value if t else "", "", home_run.value] + [r.value for r in opp_runs])
            if t == horizon:
                break
            for r in [home_run] + opp_runs:
                if r.bankrupt:
                    raise InputError(f"{r.strategy!r} bets beyond its wealth at step {t}")
                r.step(xs[t])
        csv_text = _csv(["t", "outcome", "phase", "m"] + [f"n_{j + 1}" for j in range(len(opps))], rows)
    th = sc["thresholds"]
    wf = as_value(sc["window_fraction"])
    start = horizon - math.floor(horizon * wf)
    home_valid = validate_wagers(home_run, a)
    summary = {
        "horizon": horizon,
        "home": {
            "initial": _fmt(home_run.wealth[0]),
            "final": _fmt(home_run.value),
            "success": _gain_flag(home_run, th["home_gain"]) and home_valid,
            "wagers_in_set": home_valid,
        },
        "opponents": [],
    }
    for r in opp_runs:
        active = any(inc != 0 for inc in r.increments[start:])
        summary["opponents"].append(
            {
                "initial": _fmt(r.wealth[0]),
                "final": _fmt(r.value),
                "max": _fmt(max(r.wealth)),
                "success": _gain_flag(r, th["opponent_gain"]),
                "active_in_final_window": active,
                "wagers_in_set": validate_wagers(r, b),
            }
        )
    return Outcome(csv_text, summary)


def validate_wagers(run: MartingaleRun, s) -> bool:
    """Every nonzero wager magnitude of the run lies in the closure of ``s``."""
    seen = set()
    for inc in run.increments:
        mag = abs(inc)
        if mag == 0 or mag in seen:
            continue
        if not s.closure_contains(mag):
            return False
        seen.add(mag)
    return True


def _run_check_scaling(sc: Scenario) -> Outcome:
    a, b = _field(sc, "a", set_from_json), _field(sc, "b", set_from_json)
    res = scales_into(a, b)
    return Outcome(None, res.to_json(), {"reason": res.reason})


def _run_dominate(sc: Scenario) -> Outcome:
    a, b = _field(sc, "a", set_from_json), _field(sc, "b", set_from_json)
    m = _field(sc, "m", opponent_zoo)
    f = _field(sc, "f", scaling_from_json)
    horizon = sc["horizon"]
    xs = casino_outcomes(sc["casino"], horizon)
    s = f_shadow(m, f)
    m_run, s_run = MartingaleRun.start(m), MartingaleRun.start(s)
    for t, x in enumerate(xs):
        if m_run.bankrupt:
            raise InputError(f"the dominated martingale bets beyond its wealth at step {t}")
        m_run.step(x)
        s_run.step(x)
    report = integral_bound_check(m_run, s_run, f)
    rows = [
        [t, xs[t - 1].value if t else "", m_run.wealth[t], s_run.wealth[t]]
        for t in range(horizon + 1)
    ]
    summary = {
        "horizon": horizon,
        "integral": report.to_json(),
        "m_wagers_in_a": validate_wagers(m_run, a),
        "s_wagers_in_b_closure": validate_wagers(s_run, b),
        "m_final": _fmt(m_run.value),
        "s_final": _fmt(s_run.value),
    }
    return Outcome(_csv(["t", "outcome", "m", "s"], rows), summary)


def _bounded_like(sc: Scenario, wellordered: bool) -> Outcome:
    a, b = _field(sc, "a", set_from_json), _field(sc, "b", set_from_json)
    opps = _field(sc, "opponents", _strategies)
    horizon = sc["horizon"]
    m_init = sc["m_initial"]
    if wellordered:
        cfg = WellOrderedConfig(as_value(m_init), bool(sc["observe_bets"]))
        res = well_ordered_casino(a, b, opps, horizon, cfg)
    else:
        cfg = BoundedConfig(as_value(m_init) if m_init is not None else None, bool(sc["observe_bets"]))
        res = bounded_casino(a, b, opps, horizon, cfg)
    rep = stabilization_report(res, as_value(sc["window_fraction"]))
    m0, mT = res.m_run.wealth[0], res.m_run.value
    key = "p" if wellordered else "k"
    summary = {
        "horizon": horizon,
        "m_initial": _fmt(m0),
        "m_final": _fmt(mT),
        "home_success": mT >= m0 + as_value(sc["thresholds"]["home_gain"]),
        "opponents_final": [_fmt(res.r_b * r.value) for r in res.opponent_runs],
        "stabilization": rep.to_json(),
        f"suffix_min_{key}": _fmt(rep.suffix_min.get(key)),
        "violations": res.violations,
    }
    if wellordered:
        summary["m_ge_g"] = all(m >= g for m, g in zip(res.state_log.column("m"), res.state_log.column("g")))
    return Outcome(res.state_log.to_csv(), summary, {"construction": res.metadata})


def _run_ratio_min(sc: Scenario) -> Outcome:
    a = _field(sc, "a", set_from_json)
    n = _field(sc, "n", opponent_zoo)
    m = opponent_zoo(sc["m"]) if sc["m"] is not None else RulerMartingale(a)
    horizon = sc["horizon"]
    res = ratio_min_extension(n, m, sc["prefix"], horizon)
    L = as_value(sc["L"]) if sc["L"] is not None else res.final_ratio
    windows = sc["windows"] or [w for w in (2**10, 2**12, 2**14, 2**16) if w <= horizon] or [horizon]
    dens = windowed_density(res.trace, L, as_value(sc["epsilon"]), windows)
    rows = [[r.t, "", r.n, r.m, r.n_inc, r.m_inc, r.case] for r in res.trace]
    for row, nxt in zip(rows, res.trace):
        row[1] = nxt.outcome.value
    rows.append([res.m_run.t, "", res.n_run.value, res.m_run.value, None, None, None])
    summary = {
        "horizon": horizon,
        "final_ratio": _fmt(res.final_ratio),
        "L": _fmt(L),
        "windows": windows,
        "densities": [_fmt(d) for d in dens],
        "densities_non_increasing": all(x >= y for x, y in zip(dens, dens[1:])),
        "monotone": True,
    }
    meta = {"enumeration": m.enumeration.describe()} if isinstance(m, RulerMartingale) else {}
    # row t holds the state at time t and the outcome chosen there
    return Outcome(_csv(["t", "next_outcome", "n", "m", "n_inc", "m_inc", "case"], rows), summary, meta)


def _run_validate(sc: Scenario) -> Outcome:
    a = _field(sc, "a", set_from_json)
    s = _field(sc, "strategy", opponent_zoo)
    rep = validate_strategy(s, a, int(sc["depth"]))
    return Outcome(None, rep.to_json())


def _run_density_report(sc: Scenario) -> Outcome:
    a = _field(sc, "a", set_from_json)
    eps = as_value(sc["epsilon"])
    horizon = sc["horizon"]
    summary: dict = {"horizon": horizon}
    meta = {}
    try:
        ruler = RulerMartingale(a, 1)
    except DuelError:
        ruler = None
    if ruler is not None:
        meta["enumeration"] = ruler.enumeration.describe()
        pts = Enumeration(a).prefix(int(sc["points"]))
        summary["visit_density"] = [
            {"a": _fmt(p), "epsilon": _fmt(eps), "density": _fmt(visit_density(ruler, p, eps, horizon))} for p in pts
        ]
    if sc["b"] is not None:
        b = set_from_json(sc["b"])
        if isinstance(b, IntegerSieve):
            summary["b_density"] = {str(n): _fmt(Fraction(sum(1 for i in range(1, n + 1) if b.contains(i)), n)) for n in sc["counts_upto"]}
        if sc["mcap"] is not None:
            mcap = as_value(sc["mcap"])
            xs = [as_value(x) for x in (sc["xs"] or list(range(1, 101)))]
            qs = q_profile(a, b, mcap, xs)
            summary["q_profile"] = [_fmt(q) for q in qs]
            cut = q_cutoff(xs, qs)
            summary["q_cutoff"] = _fmt(cut)
            if isinstance(b, IntegerSieve):
                summary["q_cutoff_bound"] = sieve_cutoff_bound(b, mcap)
    return Outcome(None, summary, meta)


_RUNNERS: dict[str, Callable[[Scenario], Outcome]] = {
    "simulate": _run_simulate,
    "check-scaling": _run_check_scaling,
    "dominate": _run_dominate,
    "evade-bounded": lambda sc: _bounded_like(sc, False),
    "evade-wellordered": lambda sc: _bounded_like(sc, True),
    "ratio-min": _run_ratio_min,
    "validate": _run_validate,
    "density-report": _run_density_report,
}


def execute(scenario) -> Outcome:
    """Run a scenario (dict or :class:`Scenario`) in memory."""
    sc = scenario if isinstance(scenario, Scenario) else Scenario.from_json(scenario)
    old = (PRECISION.default_bits, PRECISION.cap_bits)
    if sc.precision_bits is not None:
        set_precision(sc.precision_bits, max(old[1], sc.precision_bits))
    try:
        out = _RUNNERS[sc.mode](sc)
    finally:
        set_precision(*old)
    out.metadata = {
        "scenario": sc.to_json(),
        "version": __version__,
        "precision_bits": sc.precision_bits or old[0],
        "precision_cap_bits": old[1],
        **out.metadata,
    }
    return out


@dataclass
class RunStatus:
    code: int
    message: str = ""
    artifacts: dict = field(default_factory=dict)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_scenario(path) -> dict:
    """A scenario JSON file, or the name of a built-in scenario."""
    p = Path(path)
    if not p.exists():
        builtins = {s["name"]: s for s in builtin_scenarios()}
        if str(path) in builtins:
            return copy.deepcopy(builtins[str(path)]["scenario"])
        raise ScenarioError(f"no scenario file or built-in named {str(path)!r}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{p}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc


def run_scenario(path, out_dir=None) -> RunStatus:
    """Run a scenario file and write ``trajectory.csv``, ``metadata.json`` and ``summary.json``.

    Returns exit code 0 on success, 1 for bad input, 2 when a runtime
    invariant trap fires.
    """
    try:
        obj = path if isinstance(path, dict) else load_scenario(path)
        sc = Scenario.from_json(obj)
        out = execute(sc)
    except InvariantViolation as exc:
        return RunStatus(EXIT_INVARIANT, f"invariant violated: {type(exc).__name__}: {exc}")
    except InputError as exc:
        return RunStatus(EXIT_INPUT, f"input error: {type(exc).__name__}: {exc}")
    target = Path(out_dir or obj.get("output_dir") or Path("out") / sc.name)
    target.mkdir(parents=True, exist_ok=True)
    arts = {}
    if out.csv_text is not None:
        arts["trajectory"] = target / "trajectory.csv"
        arts["trajectory"].write_text(out.csv_text)
    arts["metadata"] = target / "metadata.json"
    arts["metadata"].write_text(_dump(out.metadata))
    arts["summary"] = target / "summary.json"
    arts["summary"].write_text(_dump(out.summary))
    return RunStatus(EXIT_OK, f"wrote {', '.join(str(p) for p in arts.values())}", arts)


# ---------------------------------------------------------------------------
# built-in scenarios
# ---------------------------------------------------------------------------

_INTEGERS = {"kind": "integer_multiples", "step": "1"}
_ODDS = {"kind": "integer_sieve", "excluded": {"kind": "multiples", "of": 2}}
_HARMONIC = {"kind": "harmonic_shifted"}


def builtin_scenarios() -> list:
    """Catalogue of ready-made scenarios with a description and the summary keys to expect."""
    intro_home = {"kind": "thresholdSwitcher", "w1": "2", "w2": "1", "initial": "2"}
    return [
        {
            "name": "intro-1-2-vs-1",
            "description": "A={1,2} against B={1}: the home gambler bets 2 until its first loss, then 1; the casino runs the two-phase script",
            "expect": ["home.success", "opponents[0].success"],
            "scenario": {
                "name": "intro-1-2-vs-1",
                "mode": "simulate",
                "a": {"kind": "finite", "values": ["1", "2"]},
                "b": {"kind": "finite", "values": ["1"]},
                "home": intro_home,
                "opponents": [{"kind": "copycat", "target": intro_home, "ratio": "1/2", "round": "nearest"}],
                "casino": {"kind": "two-phase", "lead": "3"},
                "horizon": 10000,
                "thresholds": {"home_gain": "100", "opponent_gain": "4"},
            },
        },
        {
            "name": "evens-vs-odds",
            "description": "even wagers evade odd wagers: block martingale and fragility casino against three odd-wager gamblers",
            "expect": ["home_success", "stabilization.stabilized", "violations", "m_ge_g"],
            "scenario": {
                "name": "evens-vs-odds",
                "mode": "evade-wellordered",
                "a": {"kind": "integer_multiples", "step": "2"},
                "b": _ODDS,
                "opponents": [
                    {"kind": "alwaysHeads", "w": "1", "initial": "9"},
                    {"kind": "thresholdSwitcher", "w1": "3", "w2": "1", "initial": "15"},
                    {"kind": "scripted", "wagers": ["1", "-3", "5"], "cycle": True, "initial": "21"},
                ],
                "horizon": 100000,
            },
        },
        {
            "name": "harmonic-shifted-vs-integers",
            "description": "{1+1/n} evades the positive integers: ruler martingale and padded casino against four integer-wager gamblers",
            "expect": ["home_success", "stabilization.last_active", "suffix_min_k"],
            "scenario": {
                "name": "harmonic-shifted-vs-integers",
                "mode": "evade-bounded",
                "a": _HARMONIC,
                "b": _INTEGERS,
                "opponents": [
                    {"kind": "alwaysHeads", "w": "1", "initial": "100"},
                    {"kind": "thresholdSwitcher", "w1": "1", "w2": "1", "initial": "20"},
                    {"kind": "scripted", "wagers": ["1", "-2", "3", "-1", "2"], "cycle": True, "initial": "40"},
                    {"kind": "copycat", "ratio": "1", "round": "nearest", "initial": "80",
                     "target": {"kind": "ruler", "set": _HARMONIC, "initial": "64"}},
                ],
                "horizon": 100000,
            },
        },
        {
            "name": "reciprocals-vs-V",
            "description": "{1/n} evades V = {0} and [1, inf): ruler martingale and padded casino against three V-wager gamblers",
            "expect": ["home_success", "stabilization.last_active", "suffix_min_k"],
            "scenario": {
                "name": "reciprocals-vs-V",
                "mode": "evade-bounded",
                "a": {"kind": "harmonic_reciprocal"},
                "b": {"kind": "with_zero", "inner": {"kind": "half_line", "lo": "1"}},
                "opponents": [
                    {"kind": "alwaysHeads", "w": "1", "initial": "30"},
                    {"kind": "followLast", "w": "3/2", "initial": "45"},
                    {"kind": "pseudoRandom", "values": ["1", "3/2", "2"], "seed": 3, "initial": "60"},
                ],
                "horizon": 20000,
            },
        },
        {
            "name": "rplus-vs-unit-interval",
            "description": "nonnegative reals against [0, 1]: the shadow with f(x) = min(1/x, 1) dominates",
            "expect": ["integral.ok", "s_wagers_in_b_closure"],
            "scenario": {
                "name": "rplus-vs-unit-interval",
                "mode": "dominate",
                "a": {"kind": "half_line", "lo": "0"},
                "b": {"kind": "closed_interval", "lo": "0", "hi": "1"},
                "m": {"kind": "pseudoRandom", "values": ["1", "2", "3", "4"], "seed": 1, "initial": "12"},
                "f": {"kind": "minReciprocal"},
                "casino": {"kind": "random", "seed": 1, "p_heads": "11/20"},
                "horizon": 10000,
            },
        },
        {
            "name": "dyadic-powers",
            "description": "all powers of 2 against powers of 2 up to 1: the shadow with f(x) = min(2^-floor(log2 x), 1) dominates",
            "expect": ["integral.ok", "s_wagers_in_b_closure"],
            "scenario": {
                "name": "dyadic-powers",
                "mode": "dominate",
                "a": {"kind": "geometric_powers", "base": "2", "exponents": "all"},
                "b": {"kind": "geometric_powers", "base": "2", "exponents": "nonpositive"},
                "m": {"kind": "pseudoRandom", "values": ["1/8", "1/4", "1/2", "1", "2", "4", "8"], "seed": 2,
                      "initial": "16", "zero_weight": 0},
                "f": {"kind": "dyadicFloor"},
                "casino": {"kind": "random", "seed": 2, "p_heads": "11/20"},
                "horizon": 10000,
            },
        },
        {
            "name": "sieve-density-one",
            "description": "integers minus the cubes: B has density one, yet q_M vanishes beyond a finite cutoff",
            "expect": ["b_density", "q_cutoff", "q_cutoff_bound"],
            "scenario": {
                "name": "sieve-density-one",
                "mode": "density-report",
                "a": _INTEGERS,
                "b": {"kind": "integer_sieve", "excluded": {"kind": "n_phi_n", "phi": "power", "exp": 2}},
                "mcap": "3",
                "xs": list(range(1, 101)),
                "horizon": 4096,
            },
        },
    ]


# ---------------------------------------------------------------------------
# plot scripts
# ---------------------------------------------------------------------------

_WEALTH_PREFIXES = ("m", "s", "wealth", "g")


def emit_plot_script(csv_path, out_path=None) -> str:
    """gnuplot script drawing every wealth-like column of a trajectory CSV against t."""
    text = Path(csv_path).read_text() if not isinstance(csv_path, io.StringIO) else csv_path.getvalue()
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if not header:
        raise MissingColumns(f"{csv_path}: no header row")
    if next(reader, None) is None:
        raise MissingColumns(f"{csv_path}: no data rows")
    if "t" not in header:
        raise MissingColumns(f"{csv_path}: no 't' column")
    series = [c for c in header if c in _WEALTH_PREFIXES or c.startswith("n_")]
    if not series:
        raise MissingColumns(f"{csv_path}: no wealth columns (m, s, g, wealth, n_i)")
    tcol = header.index("t") + 1
    name = os.path.basename(str(csv_path))
    lines = [
        "# gnuplot script",
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 't'",
        "set ylabel 'wealth'",
        f"set title '{name}'",
    ]
    plots = [f"'{csv_path}' using {tcol}:{header.index(c) + 1} with lines title '{c}(t)'" for c in series]
    lines.append("plot " + ", \\\n     ".join(plots))
    script = "\n".join(lines) + "\n"
    if out_path is not None:
        Path(out_path).write_text(script)
    return script
