from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from recipgamma.core.rng_dists import RngStream
from recipgamma.harness.spec import DIR_MULT_SCENARIOS, ExperimentSpec
from recipgamma.models import dir_mult, gamma, neg_bin, one_dir, student_t, wishart
from recipgamma.utils.logging import logger
from recipgamma.utils.types import ModelFamily

# Truth and sizes used when an experiment leaves a data field out
DEFAULT_DATA: Dict[ModelFamily, Dict[str, Any]] = {
    ModelFamily.GAMMA: {"n": 30, "alpha": 2.0, "beta": 1.0},
    ModelFamily.STUDENT_T: {"n": 10, "df": 1.0, "theta": 3.0, "tau": 1.0},
    ModelFamily.DIR_MULT: {"n": 100, "categories": 10, "trials": 500},
    ModelFamily.ONE_DIR: {"n": 50, "categories": 5, "trials": 20, "alpha": 1.0},
    ModelFamily.NEG_BIN: {"n": 200, "alpha": 3.0, "p": 0.5},
    ModelFamily.WISHART: {"n": 200, "dim": 4, "alpha": 2.0, "beta": 2.0},
}

DEFAULT_SCENARIO = "I"

# Sub-streams of a replication stream
DATA_STREAM = 0
CHAIN_STREAM = 1


def resolved_data(spec: ExperimentSpec) -> Dict[str, Any]:
    """The experiment's data fields merged over the family defaults; dir_mult gets its alpha vector."""
    data = {**DEFAULT_DATA[spec.model], **spec.data}
    if spec.model is ModelFamily.DIR_MULT and "alpha" not in spec.data:
        scenario = data.pop("scenario", None) or spec.scenario or DEFAULT_SCENARIO
        data["alpha"] = list(DIR_MULT_SCENARIOS[scenario])
        data["categories"] = len(data["alpha"])
        data["scenario"] = scenario
    return data


def scenario_label(spec: ExperimentSpec) -> str:
    if spec.scenario:
        return spec.scenario
    if spec.model is ModelFamily.DIR_MULT:
        return resolved_data(spec).get("scenario", "custom")
    return ""


def truth(spec: ExperimentSpec) -> Dict[str, float]:
    """
    True parameter values by report parameter name.

    Arguments:
    ----------
        spec (ExperimentSpec): experiment.

    Returns:
    --------
        Dict[str, float]: e.g. {"theta": 3.0, "tau": 1.0, "alpha": 0.5} for the t model,
        whose ``df`` truth is 2 alpha.
    """
    data = resolved_data(spec)
    if spec.model is ModelFamily.GAMMA:
        return {"alpha": float(data["alpha"]), "beta": float(data["beta"])}
    if spec.model is ModelFamily.STUDENT_T:
        return {"theta": float(data["theta"]), "tau": float(data["tau"]), "alpha": 0.5 * float(data["df"])}
    if spec.model is ModelFamily.DIR_MULT:
        return {f"alpha_{l}": float(a) for l, a in enumerate(data["alpha"])}
    if spec.model is ModelFamily.WISHART:
        return {"alpha": float(data["alpha"]), "beta": float(data["beta"])}
    return {"alpha": float(data["alpha"])}


def replication_stream(spec: ExperimentSpec, rep_index: int) -> RngStream:
    return RngStream(spec.seed, stream_id=rep_index)


def gen_data(spec: ExperimentSpec, rep_index: int) -> Any:
    """
    Synthetic dataset of one replication, drawn from the model at the configured truth.

    The draw depends on (seed, rep_index) only, so a replication reproduces its
    dataset whatever else runs before it.
    """
    data = resolved_data(spec)
    rng = replication_stream(spec, rep_index).spawn(DATA_STREAM)
    n = int(data["n"])
    logger.debug(f"Generating {spec.model.value} dataset for replication {rep_index} (n={n})")
    if spec.model is ModelFamily.GAMMA:
        return gamma.simulate(data["alpha"], data["beta"], n, rng)
    if spec.model is ModelFamily.STUDENT_T:
        return student_t.simulate(data["theta"], data["tau"], 0.5 * data["df"], n, rng)
    if spec.model is ModelFamily.DIR_MULT:
        return dir_mult.simulate(data["alpha"], np.full(n, int(data["trials"])), rng)
    if spec.model is ModelFamily.ONE_DIR:
        return one_dir.simulate(data["alpha"], int(data["categories"]), np.full(n, int(data["trials"])), rng)
    if spec.model is ModelFamily.NEG_BIN:
        return neg_bin.simulate(data["alpha"], data["p"], n, rng)
    Psi = wishart.simulate_precision(data["alpha"], data["beta"], int(data["dim"]), rng)
    return wishart.simulate(Psi, n, rng)


def dataset_frame(dataset: Any) -> pd.DataFrame:
    """One row per observation."""
    if isinstance(dataset, (gamma.GammaData, student_t.TData)):
        return pd.DataFrame({"x": dataset.x})
    if isinstance(dataset, dir_mult.DirMultData):
        return pd.DataFrame(dataset.counts, columns=[f"x_{l}" for l in range(dataset.categories)])
    if isinstance(dataset, neg_bin.NegBinData):
        return pd.DataFrame({"y": dataset.y, "p": dataset.p})
    if isinstance(dataset, wishart.WishartData):
        return pd.DataFrame(dataset.x, columns=[f"x_{j}" for j in range(dataset.dim)])
    raise TypeError(f"Unsupported dataset type {type(dataset).__name__}")


def write_dataset(dataset: Any, path: Union[str, Path]) -> Path:
    """Writes the dataset as CSV; identical datasets give byte-identical files."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dataset_frame(dataset).to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path
