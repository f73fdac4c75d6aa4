"""Feed ordinary isogeny classes (as j-invariant sets) into the hypersurface search."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from sympy import primerange

from .addcomb import GroundSet, build_hypersurface, evaluate_R, hypersurface_search
from .ec_isogeny import isogeny_class_members, ordinary_traces
from .finite_field import field_of_order


def isogeny_class_sets(q, traces):
    F = field_of_order(q)
    return [GroundSet(F, isogeny_class_members(F, a)) for a in traces]


def random_traces(q, count, rng):
    pool = [a for a in ordinary_traces(q) if a > 0]
    return [int(a) for a in rng.choice(pool, size=count)]


@dataclass
class HarnessTrial:
    q: int
    traces: list
    class_sizes: list
    found: bool
    verified: bool
    evaluations: int
    witness: list | None
    shift: list | None
    seconds: float


@dataclass
class HarnessReport:
    N: int
    budget: int
    trials: list = field(default_factory=list)

    @property
    def hit_rate(self):
        return sum(t.found for t in self.trials) / len(self.trials) if self.trials else 0.0

    @property
    def all_verified(self):
        return all(t.verified for t in self.trials if t.found)

    @property
    def within_budget(self):
        return all(t.evaluations <= self.budget for t in self.trials)

    def as_dict(self):
        return {"N": self.N, "budget": self.budget, "hit_rate": self.hit_rate,
                "all_verified": self.all_verified, "within_budget": self.within_budget,
                "trials": [t.__dict__ for t in self.trials]}


def run_harness(trials=20, seed=0, N=1, budget=10**6, q_range=(101, 400), workers=1):
    """Seeded trials: random prime q in q_range, 6N random ordinary classes, structured search."""
    rng = np.random.default_rng(seed)
    primes = list(primerange(q_range[0], q_range[1] + 1))
    H = build_hypersurface(N)
    report = HarnessReport(N, budget)
    for _ in range(trials):
        q = int(rng.choice(primes))
        traces = random_traces(q, H.arity, rng)
        classes = isogeny_class_sets(q, traces)
        t0 = time.perf_counter()
        res = hypersurface_search(classes, H, budget=budget, seed=int(rng.integers(2**32)),
                                  workers=workers)
        verified = False
        if res.found:
            value, _ = evaluate_R(H, res.witness, early_exit=False)
            verified = value.is_zero() and all(w in c for w, c in zip(res.witness, classes))
        report.trials.append(HarnessTrial(
            q, traces, [len(c) for c in classes], res.found, verified, res.evaluations,
            [int(w) for w in res.witness] if res.found else None,
            list(res.shift) if res.found else None, time.perf_counter() - t0))
    return report
