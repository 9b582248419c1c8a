"""Strategies used only by the tests."""

import hashlib
from fractions import Fraction

from duel.martingale import Player, Strategy


class _HashPlayer(Player):
    def __init__(self, owner):
        self.owner = owner

    def wager(self, history, wealth):
        key = f"{self.owner.seed}:" + "".join(x.value for x in history)
        h = int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "big")
        vals = [v for v in self.owner.values if v <= wealth]
        if not vals or h % 7 == 0:
            return Fraction(0)
        v = vals[(h >> 3) % len(vals)]
        return v if (h >> 1) & 1 else -v


class HashRandom(Strategy):
    """History-dependent test strategy: the wager is a seeded hash of the whole history."""

    def __init__(self, values, seed, initial):
        self.values = [Fraction(v) for v in values]
        self.seed = seed
        super().__init__(initial)

    def player(self):
        return _HashPlayer(self)

    def spec(self):
        return {"kind": "hashRandom", "seed": self.seed}
