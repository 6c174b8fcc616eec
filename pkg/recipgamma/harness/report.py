import json
import math
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from recipgamma.harness.spec import REPORT_COLUMNS, ReportRow
from recipgamma.utils.errors import DomainError
from recipgamma.utils.types import ModelFamily, ReportFormat

META_COLUMNS = ["model", "method", "scenario", "n"]
WIDE_METRICS = ["ess", "sess", "mse"]
_STRING_COLUMNS = {"model": str, "method": str, "scenario": str, "param": str}


def rows_frame(rows: Sequence[ReportRow]) -> pd.DataFrame:
    return pd.DataFrame([r.asdict() for r in rows], columns=REPORT_COLUMNS)


def _frame_rows(df: pd.DataFrame) -> List[ReportRow]:
    rows = []
    for rec in df.to_dict("records"):
        rows.append(
            ReportRow(
                model=str(rec["model"]),
                method=str(rec["method"]),
                scenario=str(rec["scenario"]),
                n=int(rec["n"]),
                param=str(rec["param"]),
                **{k: float(rec[k]) for k in ("ess", "sess", "ct_seconds", "mse", "accept_rate")},
            )
        )
    return rows


def _format_of(path: Path, fmt: Optional[Union[str, ReportFormat]]) -> ReportFormat:
    if fmt is None:
        return ReportFormat.from_str(path.suffix.lstrip("."))
    if isinstance(fmt, ReportFormat):
        return fmt
    return ReportFormat.from_str(fmt)


def write_report(
    rows: Sequence[ReportRow],
    out_path: Union[str, Path],
    fmt: Optional[Union[str, ReportFormat]] = None,
) -> Path:
    """
    Writes report rows in the long schema ``model,method,scenario,n,param,ess,sess,ct_seconds,mse,accept_rate``.

    Arguments:
    ----------
        rows (Sequence[ReportRow]): at least one row.
        out_path (str or Path): destination file; parent directories are created.
        fmt (str or ReportFormat, optional): csv, json or parquet; taken from the file
            suffix when omitted.

    Returns:
    --------
        Path of the written file. JSON is an array of objects with the CSV keys, NaN
        written as null.
    """
    if not rows:
        raise DomainError("rows", 0, "at least one report row")
    path = Path(out_path)
    fmt = _format_of(path, fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = rows_frame(rows)
    if fmt is ReportFormat.CSV:
        df.to_csv(path, index=False, float_format="%.17g", na_rep="nan", lineterminator="\n")
    elif fmt is ReportFormat.JSON:
        records = [
            {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in r.asdict().items()}
            for r in rows
        ]
        with open(path, "w") as f:
            json.dump(records, f, indent=2)
            f.write("\n")
    else:
        pq.write_table(pa.Table.from_pandas(df, preserve_index=False), path)
    return path


def read_report(path: Union[str, Path], fmt: Optional[Union[str, ReportFormat]] = None) -> List[ReportRow]:
    path = Path(path)
    fmt = _format_of(path, fmt)
    if fmt is ReportFormat.CSV:
        df = pd.read_csv(path, dtype=_STRING_COLUMNS, keep_default_na=False, na_values=["nan"])
    elif fmt is ReportFormat.JSON:
        with open(path) as f:
            records = json.load(f)
        df = pd.DataFrame(
            [{k: (math.nan if v is None else v) for k, v in rec.items()} for rec in records],
            columns=REPORT_COLUMNS,
        )
    else:
        df = pq.read_table(path).to_pandas()
    missing = [c for c in REPORT_COLUMNS if c not in df.columns]
    if missing:
        raise DomainError("columns", missing, f"present in a report ({REPORT_COLUMNS})")
    return _frame_rows(df)


def mse_scale(model: str, n: int) -> float:
    """
    Display scale of dir_mult MSEs: x10^3 for n = 100, x10^4 for n = 1000.

    The scaled value is the coordinate-averaged squared error of the posterior
    means. It is bounded below by the known-probability information bound,
    about 0.1 at scale x10^3 for scenario I with n = 100.
    """
    if model != ModelFamily.DIR_MULT.value:
        return 1.0
    return 10.0 ** (math.ceil(math.log10(n)) + 1)


def to_wide(rows: Union[Sequence[ReportRow], pd.DataFrame]) -> pd.DataFrame:
    """
    Table layout of the long report: one line per (model, method, scenario, n),
    ``{param}_{ess|sess|mse}`` columns, ``ct_seconds`` and the ``mse_scale`` the
    MSE columns were multiplied by.
    """
    df = rows if isinstance(rows, pd.DataFrame) else rows_frame(rows)
    df = df.copy()
    df["mse_scale"] = [mse_scale(m, n) for m, n in zip(df["model"], df["n"])]
    df["mse"] = df["mse"] * df["mse_scale"]
    params = list(dict.fromkeys(df["param"]))
    keys = pd.MultiIndex.from_frame(df[META_COLUMNS].drop_duplicates())
    wide = df.set_index(META_COLUMNS + ["param"])[WIDE_METRICS].unstack("param")
    wide.columns = [f"{param}_{metric}" for metric, param in wide.columns]
    ordered = [f"{p}_{m}" for p in params for m in WIDE_METRICS if f"{p}_{m}" in wide.columns]
    extras = df.groupby(META_COLUMNS, sort=False)[["ct_seconds", "mse_scale"]].first()
    return wide.reindex(keys)[ordered].join(extras).reset_index()


def compare_methods(rows: Union[Sequence[ReportRow], pd.DataFrame], reference: str) -> pd.DataFrame:
    """
    Long report with an ``mse_ratio`` column: each row's MSE over the MSE of
    ``reference`` for the same model, scenario, n and parameter.
    """
    df = rows if isinstance(rows, pd.DataFrame) else rows_frame(rows)
    keys = ["model", "scenario", "n", "param"]
    ref = df.loc[df["method"] == reference, keys + ["mse"]]
    if ref.empty:
        raise DomainError("reference", reference, f"one of the report methods {sorted(set(df['method']))}")
    merged = df.merge(ref.rename(columns={"mse": "reference_mse"}), on=keys, how="left")
    merged["mse_ratio"] = merged["mse"] / merged["reference_mse"]
    return merged.drop(columns="reference_mse")
