import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq
from tqdm.auto import tqdm

from recipgamma.bounded_executor import BoundedExecutor
from recipgamma.core.diagnostics import chain_ess, mse_report, posterior_summary
from recipgamma.harness.datagen import CHAIN_STREAM, gen_data, replication_stream, resolved_data, scenario_label, truth
from recipgamma.harness.spec import ExperimentSpec, ReportRow
from recipgamma.models import build_config, get_sampler, run_chain
from recipgamma.utils.constants import MAX_FAILED_FRACTION, RECIPGAMMA_THREADS
from recipgamma.utils.errors import DomainError, ExperimentFailedError, RecipGammaError
from recipgamma.utils.logging import logger
from recipgamma.utils.types import ModelFamily

REPLICATION_COLUMNS = [
    "rep_index",
    "param",
    "estimate",
    "ess",
    "accept_rate",
    "wall_seconds",
    "failed",
    "error",
]

# Aggregate row of the dir_mult reports, averaged over the alpha coordinates
ALPHA_MEAN = "alpha_mean"


@dataclass(frozen=True)
class ReplicationResult:
    rep_index: int
    estimates: Dict[str, float] = field(default_factory=dict)
    ess: Dict[str, float] = field(default_factory=dict)
    accept_rate: Dict[str, float] = field(default_factory=dict)
    wall_seconds: float = math.nan
    clamped_latents: int = 0
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def records(self) -> List[Dict]:
        if self.failed:
            return [
                {
                    "rep_index": self.rep_index,
                    "param": "",
                    "estimate": math.nan,
                    "ess": math.nan,
                    "accept_rate": math.nan,
                    "wall_seconds": math.nan,
                    "failed": True,
                    "error": self.error,
                }
            ]
        return [
            {
                "rep_index": self.rep_index,
                "param": name,
                "estimate": est,
                "ess": self.ess[name],
                "accept_rate": self.accept_rate[name],
                "wall_seconds": self.wall_seconds,
                "failed": False,
                "error": "",
            }
            for name, est in self.estimates.items()
        ]


def run_replication(spec: ExperimentSpec, rep_index: int) -> ReplicationResult:
    """
    Generates the replication's dataset and runs one chain on it.

    Sampler and numerical errors do not propagate: they are logged and returned
    as a failed ReplicationResult carrying the error text.
    """
    logger.debug(f"Replication {rep_index} of {spec.model.value}/{spec.method_label} started")
    try:
        dataset = gen_data(spec, rep_index)
        sampler = get_sampler(spec.model, spec.method)
        cfg = build_config(spec.model, spec.method, spec.prior, spec.k_levels)
        rng = replication_stream(spec, rep_index).spawn(CHAIN_STREAM)
        result = run_chain(sampler, dataset, cfg, rng, spec.chain.burn_in, spec.chain.draws)
    except (RecipGammaError, ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
        logger.error(f"Replication {rep_index} of {spec.model.value}/{spec.method_label} failed: {e}")
        return ReplicationResult(rep_index=rep_index, error=f"{type(e).__name__}: {e}")
    if result.clamped_latents:
        logger.debug(f"Replication {rep_index}: {result.clamped_latents} beta latents clamped away from 0/1")
    summary = posterior_summary(result.draws, result.param_names)
    logger.debug(f"Replication {rep_index} finished in {result.wall_seconds:.3f}s")
    return ReplicationResult(
        rep_index=rep_index,
        estimates={k: float(v) for k, v in summary["mean"].items()},
        ess=chain_ess(result),
        accept_rate={name: result.accept_rate_of(name) for name in result.param_names},
        wall_seconds=result.wall_seconds,
        clamped_latents=result.clamped_latents,
    )


def resolve_workers(parallel: int = 1) -> int:
    """Worker count; a set RECIPGAMMA_THREADS wins over ``parallel``."""
    if RECIPGAMMA_THREADS:
        try:
            parallel = int(RECIPGAMMA_THREADS)
        except ValueError:
            raise DomainError("RECIPGAMMA_THREADS", RECIPGAMMA_THREADS, "a positive integer") from None
    if parallel < 1:
        raise DomainError("parallel", parallel, "a positive integer")
    return parallel


def _finite_mean(values: Sequence[float]) -> float:
    arr = np.asarray(values, dtype=float)
    arr = arr[np.isfinite(arr)]
    return float(arr.mean()) if arr.size else math.nan


def _mse(estimates: Sequence[float], true_value: float) -> float:
    if len(estimates) >= 2:
        return mse_report(estimates, true_value).mse
    return float(np.mean((np.asarray(estimates, dtype=float) - true_value) ** 2))


def aggregate(spec: ExperimentSpec, results: Sequence[ReplicationResult]) -> List[ReportRow]:
    """
    Folds successful replications, in rep_index order, into one ReportRow per parameter.

    ESS, per-replication sESS, CT and acceptance are averaged; MSE compares the
    per-replication posterior means with the truth. dir_mult reports get an extra
    ``alpha_mean`` row averaging the coordinate rows.
    """
    ok = sorted((r for r in results if not r.failed), key=lambda r: r.rep_index)
    if not ok:
        return []
    true_values = truth(spec)
    meta = {
        "model": spec.model.value,
        "method": spec.method_label,
        "scenario": scenario_label(spec),
        "n": int(resolved_data(spec)["n"]),
    }
    ct = _finite_mean([r.wall_seconds for r in ok])
    rows = []
    for name, true_value in true_values.items():
        ess_values = [r.ess[name] for r in ok]
        rows.append(
            ReportRow(
                **meta,
                param=name,
                ess=_finite_mean(ess_values),
                sess=_finite_mean([e / r.wall_seconds for e, r in zip(ess_values, ok) if r.wall_seconds > 0]),
                ct_seconds=ct,
                mse=_mse([r.estimates[name] for r in ok], true_value),
                accept_rate=_finite_mean([r.accept_rate[name] for r in ok]),
            )
        )
    if spec.model is ModelFamily.DIR_MULT:
        rows.append(
            ReportRow(
                **meta,
                param=ALPHA_MEAN,
                ess=_finite_mean([row.ess for row in rows]),
                sess=_finite_mean([row.sess for row in rows]),
                ct_seconds=ct,
                mse=_finite_mean([row.mse for row in rows]),
                accept_rate=_finite_mean([row.accept_rate for row in rows]),
            )
        )
    return rows


def replications_frame(results: Sequence[ReplicationResult]) -> pd.DataFrame:
    records = [rec for r in sorted(results, key=lambda r: r.rep_index) for rec in r.records()]
    return pd.DataFrame(records, columns=REPLICATION_COLUMNS)


def write_replications(
    spec: ExperimentSpec, results: Sequence[ReplicationResult], out_dir: Union[str, Path]
) -> Path:
    """Persists the per-replication rows of an experiment as parquet."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    label = scenario_label(spec) or "default"
    n = int(resolved_data(spec)["n"])
    path = out_dir / f"{spec.model.value}_{spec.method_label}_{label}_n{n}_replications.parquet"
    table = pa.Table.from_pandas(replications_frame(results), preserve_index=False)
    pq.write_table(table, path)
    return path


def get_progress_bar(total: int, desc: str, disable: bool) -> tqdm:
    return tqdm(
        total=total,
        desc=f"  {desc}",
        bar_format="{l_bar}{bar}| {n_fmt}/{total_fmt} [{elapsed}, {rate_fmt}{postfix}]",
        ncols=80,
        colour="#008000",
        unit=" rep",
        disable=disable,
    )


def run_experiment(
    spec: ExperimentSpec,
    parallel: int = 1,
    out_dir: Optional[Union[str, Path]] = None,
    progress: bool = False,
) -> List[ReportRow]:
    """
    Runs every replication of an experiment and aggregates the report rows.

    Arguments:
    ----------
        spec (ExperimentSpec): validated experiment.
        parallel (int): worker threads; RECIPGAMMA_THREADS overrides it. Results do
            not depend on the worker count.
        out_dir (str or Path, optional): when given, the replication-level rows are
            written there as parquet.
        progress (bool): show a tqdm progress bar over replications.

    Returns:
    --------
        List[ReportRow]: one row per parameter.

    Raises:
    -------
        ExperimentFailedError: when more than 5% of the replications failed.
    """
    workers = resolve_workers(parallel)
    reps = range(spec.replications)
    logger.info(
        f"Running {spec.model.value}/{spec.method_label}: {spec.replications} replications, "
        f"{spec.chain.burn_in}+{spec.chain.draws} sweeps, {workers} worker(s)"
    )
    progress_bar = get_progress_bar(spec.replications, f"{spec.model.value}/{spec.method_label}", not progress)
    if workers == 1:
        results = []
        for rep_index in reps:
            results.append(run_replication(spec, rep_index))
            progress_bar.update(1)
    else:
        with BoundedExecutor(workers, workers) as executor:
            results = executor.map_ordered(
                lambda rep_index: run_replication(spec, rep_index),
                reps,
                on_result=lambda _: progress_bar.update(1),
            )
    progress_bar.close()

    failed = sum(r.failed for r in results)
    if out_dir is not None:
        path = write_replications(spec, results, out_dir)
        logger.info(f"Replication rows written to {path}")
    if failed > MAX_FAILED_FRACTION * spec.replications:
        raise ExperimentFailedError(failed, spec.replications, MAX_FAILED_FRACTION)
    if failed:
        logger.warning(f"{failed} of {spec.replications} replications failed and are left out")
    return aggregate(spec, results)
