"""Randomised cross-checks of every engine against n! * eval_direct."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import factorial

from .errors import CharacteristicDividesFactorial, CharacteristicTwo
from .polarize import (coefficient_extraction, polarize_offset, polarize_operator,
                       polarize_signed, polarize_subset_sum, polarize_subset_sum_gray, recover)
from .rng import SplitMix64, derive_seed
from .scalar import Field, scalar_to_json
from .symtensor import diagonal, eval_direct, random_symmetric, tensor_to_json
from .vector import random_vector

ENGINES = ("operator", "subset", "gray", "offset", "signed", "derivative")
ALL_METHODS = ENGINES + ("recover",)

LIMITS = {"n": 10, "d": 6, "trials": 10**6}


@dataclass
class TrialResult:
    index: int
    seed: int
    engines: list
    agree: bool
    timings_ns: dict


@dataclass
class RunReport:
    command: str
    seed: int
    field: str
    n: int
    d: int
    methods: list
    trials: list = field(default_factory=list)
    failure: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None and all(t.agree for t in self.trials)

    def timing_totals(self) -> dict:
        totals: dict = {}
        for t in self.trials:
            for k, v in t.timings_ns.items():
                totals[k] = totals.get(k, 0) + v
        return totals

    def to_json(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        out["timing_totals_ns"] = self.timing_totals()
        return out


def make_instance(n: int, d: int, field: Field, seed: int):
    """Tensor, argument vectors and offset for one trial, all from ``seed``."""
    rng = SplitMix64(seed)
    u = random_symmetric(n, d, field, seed=rng.next_u64())
    xs = [random_vector(rng, d, field) for _ in range(n)]
    x0 = random_vector(rng, d, field)
    return u, xs, x0


def _normalise(method: str, value, n: int, field: Field):
    """Bring each engine's output to the scale n! * u."""
    if method == "signed":
        return value * field(2 ** n).inverse() if field.characteristic else value / 2 ** n
    if method == "recover":
        return value * factorial(n)
    return value


def run_trial(args) -> TrialResult:
    index, master, n, d, field, methods = args
    seed = derive_seed(master, index)
    u, xs, x0 = make_instance(n, d, field, seed)
    diag = diagonal(u)
    expected = factorial(n) * eval_direct(u, xs)
    runners = {
        "operator": lambda: polarize_operator(diag, xs),
        "subset": lambda: polarize_subset_sum(diag, xs),
        "gray": lambda: polarize_subset_sum_gray(diag, xs),
        "offset": lambda: polarize_offset(diag, xs, x0),
        "signed": lambda: polarize_signed(diag, xs),
        "derivative": lambda: coefficient_extraction(u, xs),
        "recover": lambda: recover(diag, xs, "subset"),
    }
    results, timings, agree = [], {}, True
    for m in methods:
        t0 = time.perf_counter_ns()
        value = runners[m]()
        timings[m] = time.perf_counter_ns() - t0
        ok = _normalise(m, value, n, field) == expected
        agree &= ok
        results.append({"method": m, "value": scalar_to_json(value), "agree": ok})
    return TrialResult(index, seed, results, agree, timings)


def reproducer(n: int, d: int, field: Field, seed: int) -> dict:
    u, xs, x0 = make_instance(n, d, field, seed)
    return {
        "seed": seed,
        "tensor": tensor_to_json(u),
        "vectors": [x.to_json() for x in xs],
        "x0": x0.to_json(),
        "expected": scalar_to_json(factorial(n) * eval_direct(u, xs)),
        "scale": "n! * u",
    }


def check_capability(n: int, field: Field, methods) -> None:
    """Raise before any work if a requested method cannot run over ``field``."""
    p = field.characteristic
    if "signed" in methods and p == 2:
        raise CharacteristicTwo("method 'signed' is undefined in characteristic 2")
    if "recover" in methods and 0 < p <= n:
        raise CharacteristicDividesFactorial(n, p)


def run_campaign(n: int, d: int, trials: int, field: Field, methods, seed: int,
                 jobs: int = 1, command: str = "") -> RunReport:
    for name, value in (("n", n), ("d", d), ("trials", trials)):
        if value > LIMITS[name]:
            raise ValueError(f"{name} = {value} exceeds the limit {LIMITS[name]}")
    if n < 1 or d < 1 or trials < 0:
        raise ValueError("n and d must be >= 1 and trials >= 0")
    methods = list(methods)
    unknown = [m for m in methods if m not in ALL_METHODS]
    if unknown:
        raise ValueError(f"unknown methods {unknown}; choose from {ALL_METHODS}")
    report = RunReport(command, seed, repr(field), n, d, methods)
    if trials == 0:
        return report
    check_capability(n, field, methods)
    work = [(i, seed, n, d, field, methods) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_trial, work, chunksize=max(1, trials // (4 * jobs))))
    else:
        results = [run_trial(w) for w in work]
    report.trials = results
    bad = next((t for t in results if not t.agree), None)
    if bad is not None:
        report.failure = {"trial": bad.index, "engines": bad.engines,
                          "reproducer": reproducer(n, d, field, bad.seed)}
    return report
