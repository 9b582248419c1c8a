"""A gambler restricted to [0, 1] shadows one who may bet any amount.

The shadow scales each wager by f(wealth) = min(1/wealth, 1), so its wager
never exceeds 1, and its wealth stays above the integral of f up to the
leader's wealth.  Prints a few checkpoints of both ledgers.
"""

import math
import random

from duel.domination import MinReciprocal, f_shadow, integral_bound_check
from duel.martingale import H, T, MartingaleRun
from duel.wagerset import HalfLine
from duel.zoo import Scripted, StopOnBankrupt

STEPS = 4000


def main(seed=5):
    rng = random.Random(seed)
    # backs heads with a rotating stake, and the coin favours heads
    leader = StopOnBankrupt(Scripted(["1", "2", "1/2"], 20, cycle=True), HalfLine(0))
    f = MinReciprocal()
    m, s = MartingaleRun.start(leader), MartingaleRun.start(f_shadow(leader, f))
    for t in range(STEPS):
        x = H if rng.random() < 0.6 else T
        m.step(x)
        s.step(x)
        if t % 500 == 499:
            floor = 1 + math.log(m.value) if m.value >= 1 else float(m.value)
            print(f"t={t + 1:5d}  leader {float(m.value):10.2f}  shadow {float(s.value):7.3f}  integral {floor:7.3f}")
    rep = integral_bound_check(m, s, f)
    print("largest shadow wager:", max(abs(i) for i in s.increments))
    print("integral bound holds at every step:", rep.ok)


if __name__ == "__main__":
    main()
