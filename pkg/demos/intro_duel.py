"""Two gamblers, wagers {1, 2} against wagers {1}.

The home gambler stakes 2 until the first tails and 1 afterwards.  The
casino lets it build a lead, then spends the rest of the game opposing
whatever gambler 1 does.  Run with ``python3 demos/intro_duel.py``.
"""

from duel.evasion import stabilization_report, two_phase_casino
from duel.wagerset import Finite
from duel.zoo import Copycat, ThresholdSwitcher, always_heads, always_tails

HORIZON = 10_000


def main():
    home = ThresholdSwitcher(2, 1, initial=2)
    rivals = {
        "copycat at half stake": Copycat(home, "1/2", "nearest", initial=1),
        "always heads": always_heads(1, 1),
        "always tails": always_tails(1, 1),
    }
    for label, rival in rivals.items():
        res = two_phase_casino(home, [rival], HORIZON, lead=3, b=Finite((1,)))
        rep = stabilization_report(res)
        n = res.opponent_runs[0]
        print(f"{label:22s} home {res.m_run.wealth[0]} -> {res.m_run.value}   "
              f"rival {n.wealth[0]} -> {n.value} (peak {max(n.wealth)}), last bet before t={rep.last_active[0]}")


if __name__ == "__main__":
    main()
