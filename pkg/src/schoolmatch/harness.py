"""Seeded Monte Carlo driver.

One trial = one generated instance, a truthful baseline matching per
mechanism, and one altered matching per (strategy, sophisticated-count)
cell and mechanism. Every rng stream is derived from
(master_seed, trial_index) plus per-cell tags, so trials parallelize
freely and adding strategies or counts to the sweep never perturbs other
cells.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from multiprocessing import Pool

import numpy as np

from .geninst import GenConfig, build_instance
from .mechanisms import boston, deferred_acceptance
from .metrics import MetricsRecord, em_higher, em_selected, em_top3
from .strategies import Strategy, build_plan

# Trial workers look mechanisms up here at call time; tests swap entries
# for instrumented wrappers.
MECHANISMS = {
    "boston": boston,
    "da": deferred_acceptance,
}

_TAG_INSTANCE = 0x1A57A4CE
_TAG_PLAN = 0x9B5EED
_STRATEGY_CODE = {Strategy.A: 1, Strategy.B: 2, Strategy.C: 3}


def default_soph_counts(n: int) -> tuple[int, ...]:
    """Twenty evenly spaced counts up to n (100, 200, ... 2000 at n=2000)."""
    step = max(1, n // 20)
    return tuple(range(step, n + 1, step))


@dataclass(frozen=True)
class SweepConfig:
    gen: GenConfig = field(default_factory=GenConfig)
    trials: int = 100
    strategies: tuple[Strategy, ...] = (Strategy.A, Strategy.B, Strategy.C)
    mechanisms: tuple[str, ...] = ("boston", "da")
    soph_counts: tuple[int, ...] | None = None
    master_seed: int = 0
    output_path: str | None = None  # None writes to stdout

    def __post_init__(self) -> None:
        if self.soph_counts is None:
            object.__setattr__(self, "soph_counts", default_soph_counts(self.gen.n))
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if not self.strategies:
            raise ValueError("need at least one strategy")
        if not self.mechanisms:
            raise ValueError("need at least one mechanism")
        for name in self.mechanisms:
            if name not in MECHANISMS:
                raise ValueError(f"unknown mechanism {name!r}; choose from {sorted(MECHANISMS)}")
        if not self.soph_counts:
            raise ValueError("need at least one sophisticated-student count")
        for k in self.soph_counts:
            if not 0 <= k <= self.gen.n:
                raise ValueError(f"sophisticated count {k} out of range [0, {self.gen.n}]")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class AggregateRow:
    """Per-cell arithmetic means over all trials."""

    mechanism: str
    strategy: Strategy
    k_sophisticated: int
    mean_em_higher: float
    mean_em_top3: float
    mean_em_selected: float | None
    trials: int


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Integer seed for one trial's instance stream; rebuildable standalone."""
    ss = np.random.SeedSequence((master_seed, _TAG_INSTANCE, trial_index))
    return int(ss.generate_state(1, np.uint64)[0])


def _plan_rng(
    master_seed: int, trial_index: int, strategy: Strategy, k: int
) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(
            (master_seed, _TAG_PLAN, trial_index, _STRATEGY_CODE[strategy], k)
        )
    )


def run_trial(cfg: SweepConfig, trial_index: int) -> list[MetricsRecord]:
    """One instance, truthful baselines once per mechanism, all cells."""
    seed = trial_seed(cfg.master_seed, trial_index)
    inst = build_instance(cfg.gen, np.random.default_rng(seed))
    mech_fns = {name: MECHANISMS[name] for name in cfg.mechanisms}
    baselines = {name: fn(inst, inst.true_prefs) for name, fn in mech_fns.items()}
    records = []
    for strategy in cfg.strategies:
        for k in cfg.soph_counts:
            plan = build_plan(inst, strategy, k, _plan_rng(cfg.master_seed, trial_index, strategy, k))
            for name, fn in mech_fns.items():
                altered = fn(inst, plan.reported)
                selected_pct = None
                if strategy is Strategy.C:
                    selected_pct = em_selected(altered, plan.sophisticated, plan.selected_school)
                records.append(
                    MetricsRecord(
                        mechanism=name,
                        strategy=strategy,
                        k_sophisticated=k,
                        em_higher=em_higher(
                            baselines[name], altered, plan.sophisticated, inst.true_prefs
                        ),
                        em_top3=em_top3(
                            baselines[name], altered, plan.sophisticated, inst.true_prefs
                        ),
                        em_selected=selected_pct,
                        trial_seed=seed,
                    )
                )
    return records


def run_trials(cfg: SweepConfig, jobs: int = 1) -> list[list[MetricsRecord]]:
    """All trials' records, in trial-index order regardless of scheduling."""
    if jobs < 1:
        raise ValueError(f"need at least one worker, got {jobs}")
    if jobs == 1:
        return [run_trial(cfg, t) for t in range(cfg.trials)]
    with Pool(processes=jobs) as pool:
        return pool.map(partial(run_trial, cfg), range(cfg.trials))


def aggregate(records_by_trial: list[list[MetricsRecord]]) -> list[AggregateRow]:
    """Arithmetic mean per (mechanism, strategy, k) cell over all trials."""
    cells: dict[tuple[str, Strategy, int], list[MetricsRecord]] = {}
    for trial_records in records_by_trial:
        for rec in trial_records:
            cells.setdefault((rec.mechanism, rec.strategy, rec.k_sophisticated), []).append(rec)
    rows = []
    for (mechanism, strategy, k), recs in cells.items():
        selected_values = [r.em_selected for r in recs if r.em_selected is not None]
        rows.append(
            AggregateRow(
                mechanism=mechanism,
                strategy=strategy,
                k_sophisticated=k,
                mean_em_higher=sum(r.em_higher for r in recs) / len(recs),
                mean_em_top3=sum(r.em_top3 for r in recs) / len(recs),
                mean_em_selected=(
                    sum(selected_values) / len(selected_values) if selected_values else None
                ),
                trials=len(recs),
            )
        )
    rows.sort(key=lambda r: (r.strategy.value, r.mechanism, r.k_sophisticated))
    return rows


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list[AggregateRow]:
    """Run all trials and aggregate; rows sorted by (strategy, mechanism, k)."""
    return aggregate(run_trials(cfg, jobs))


CSV_HEADER = "mechanism,strategy,k_sophisticated,mean_em_higher,mean_em_top3,mean_em_selected,trials"


def render_csv(rows: list[AggregateRow]) -> str:
    """Deterministic CSV text for the aggregate rows (4-decimal floats)."""
    if not rows:
        raise ValueError("no aggregate rows to render")
    lines = [CSV_HEADER]
    for r in rows:
        selected = "" if r.mean_em_selected is None else f"{r.mean_em_selected:.4f}"
        lines.append(
            f"{r.mechanism},{r.strategy.value},{r.k_sophisticated},"
            f"{r.mean_em_higher:.4f},{r.mean_em_top3:.4f},{selected},{r.trials}"
        )
    return "\n".join(lines) + "\n"


def write_csv(rows: list[AggregateRow], path: str) -> None:
    """Write render_csv output to path; empty input raises before touching it."""
    text = render_csv(rows)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"could not write CSV to {path}: {exc}") from exc


PER_TRIAL_HEADER = (
    "mechanism,strategy,k_sophisticated,trial,em_higher,em_top3,em_selected,trial_seed"
)


def write_per_trial_csv(records_by_trial: list[list[MetricsRecord]], path: str) -> None:
    """Raw per-trial records for variance analysis, one row per cell."""
    if not records_by_trial:
        raise ValueError("no trial records to write")
    rows = []
    for trial, records in enumerate(records_by_trial):
        for rec in records:
            selected = "" if rec.em_selected is None else f"{rec.em_selected:.4f}"
            rows.append(
                (
                    (rec.strategy.value, rec.mechanism, rec.k_sophisticated, trial),
                    f"{rec.mechanism},{rec.strategy.value},{rec.k_sophisticated},{trial},"
                    f"{rec.em_higher:.4f},{rec.em_top3:.4f},{selected},{rec.trial_seed}",
                )
            )
    rows.sort(key=lambda pair: pair[0])
    text = "\n".join([PER_TRIAL_HEADER] + [line for _, line in rows]) + "\n"
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"could not write per-trial CSV to {path}: {exc}") from exc
