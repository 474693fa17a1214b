"""Run every case pipeline over a parameter range and aggregate the verdicts."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .. import lattice
from . import cases
from .cases import CaseResult, Comparison


@dataclass(frozen=True)
class LedgerConfig:
    M_min: int = 5
    M_max: int = 30
    corrupt: tuple = ()  # (claim name, bound) pairs, a test hook
    include_experimental: bool = True
    smooth_center_n: tuple = (1, 2, 3)
    jobs: int = 1
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def M_values(self) -> range:
        return range(self.M_min, self.M_max + 1)


def involution_case(M: int) -> CaseResult:
    T = lattice.tau_matrix(M)
    sq = ((T[0][0] * T[0][0] + T[0][1] * T[1][0], T[0][0] * T[0][1] + T[0][1] * T[1][1]),
          (T[1][0] * T[0][0] + T[1][1] * T[1][0], T[1][0] * T[0][1] + T[1][1] * T[1][1]))
    comps = [
        Comparison("tau^2 is the identity", Fraction(int(sq == ((1, 0), (0, 1)))), "=", Fraction(1)),
        Comparison("maximality bound", lattice.maximality_bound(M), "=", Fraction(M, M - 1)),
    ]
    verdict = "contradiction" if all(c.holds for c in comps) else "no-contradiction"
    return CaseResult("involution", (("M", M),), verdict, "tau is an involution on the class lattice",
                      (), tuple(comps))


def ledger_tasks(config: LedgerConfig) -> list:
    """Deterministically ordered ``(function name, args)`` pairs."""
    Ms = list(config.M_values)
    if not Ms:
        return []
    corrupt = dict(config.corrupt)
    tasks = []
    for M in Ms:
        for n in config.smooth_center_n:
            tasks.append(("exclude_smooth_center", (M, n)))
        tasks.append(("exclude_smooth_center", (M, None)))
    for M in Ms:
        for mu in range(3, M - 2):
            tasks.append(("exclude_low_mult_point", (M, mu)))
            tasks.append(("exclude_L0", (mu, M, corrupt or None)))
            tasks.append(("lemma3_case", (mu, M)))
            if mu >= 5:
                tasks.append(("exclude_mu_ge_5", (mu, M)))
        if M >= 7:
            tasks.append(("exclude_mu_ge_5", (4, M)))  # negative control
            tasks.append(("exclude_mu4", (M,)))
        tasks.append(("involution_case", (M,)))
    for mu in range(3, max(Ms) - 1):
        tasks.append(("exclude_Y_equals_R", (mu,)))
    if config.include_experimental:
        for M in Ms:
            if M >= 6:
                tasks.append(("exclude_mu3_extension", (M,)))
    return tasks


def _run(task) -> CaseResult:
    name, args = task
    fn = involution_case if name == "involution_case" else getattr(cases, name)
    return fn(*args)


def run_claim_ledger(config: LedgerConfig | None = None) -> list:
    config = config or LedgerConfig()
    tasks = ledger_tasks(config)
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as ex:
            return list(ex.map(_run, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))
    return [_run(t) for t in tasks]


def ledger_status(results, strict_mu3: bool = False) -> int:
    """0 when every non-experimental case has its expected verdict, else 1."""
    for r in results:
        if r.experimental and not strict_mu3:
            continue
        if not r.ok:
            return 1
    return 0
