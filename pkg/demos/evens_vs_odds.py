"""Even wagers against odd wagers, well-ordered construction.

Three gamblers who may only stake odd amounts face a casino that serves
a block martingale over even stakes.  Each of them eventually stops
betting while the even gambler keeps growing.
"""

import sys

from duel.evasion import stabilization_report, well_ordered_casino
from duel.wagerset import IntegerMultiples, IntegerSieve, MultiplesExclusion
from duel.zoo import Scripted, ThresholdSwitcher, always_heads


def main(horizon=20_000):
    odds = IntegerSieve(MultiplesExclusion(2))
    rivals = [always_heads(1, 9), ThresholdSwitcher(3, 1, 15), Scripted([1, -3, 5], 21, cycle=True)]
    res = well_ordered_casino(IntegerMultiples(2), odds, rivals, horizon)
    rep = stabilization_report(res)
    print(f"even gambler: {res.m_run.wealth[0]} -> {res.m_run.value} over {horizon} rounds")
    for j, (run, last) in enumerate(zip(res.opponent_runs, rep.last_active), 1):
        print(f"odd gambler {j}: {run.wealth[0]} -> {run.value}, last bet before t={last}")
    print("fragility violations:", len(res.violations))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 20_000)
