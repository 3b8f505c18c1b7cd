import json
import math
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from mfl.core.instance import Instance
from mfl.ommfl.wrapper import cost_multiplier

TRIAL_COLUMNS = [
    "order", "seed", "algorithm", "ofl", "instance_hash", "n", "m", "k_max",
    "facility_cost", "connection_cost", "cost", "paid", "opt", "ratio",
    "alpha", "rounding_cost", "fallback_cost", "free_cost",
    "rounding_paths", "fallback_paths", "free_paths", "plugin_cost",
]


def onmfl_envelope(k_max: int, n: int, m: int) -> float:
    """log2(kn + 1) * log2(m + 1)"""
    return math.log2(k_max * n + 1) * math.log2(m + 1)


def ommfl_envelope(inst: Instance) -> float:
    return cost_multiplier(inst.f_max, inst.f_min, inst.c_max, inst.c_min, inst.k_max)


def _clean(value):
    """JSON-friendly scalar: numpy types unwrapped, NaN as null."""
    if value is None:
        return None
    value = value.item() if hasattr(value, "item") else value
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


@dataclass
class TrialReport:
    """
    One row per trial plus aggregate statistics. Ratios are paid cost over
    Opt; trials without oracle coverage carry no ratio and are left out of
    the ratio statistics.
    """
    trials: pd.DataFrame
    onmfl_envelope: float
    ommfl_envelope: float

    @classmethod
    def from_rows(cls, rows: list[dict], inst: Instance) -> "TrialReport":
        trials = pd.DataFrame(rows, columns=TRIAL_COLUMNS)
        trials = trials.sort_values(["order", "seed"], kind="stable").reset_index(drop=True)
        return cls(
            trials=trials,
            onmfl_envelope=onmfl_envelope(inst.k_max, inst.n, inst.m),
            ommfl_envelope=ommfl_envelope(inst),
        )

    @property
    def ratios(self) -> pd.Series:
        return self.trials["ratio"].dropna().astype(float)

    @property
    def mean_ratio(self) -> float | None:
        return _clean(self.ratios.mean()) if not self.ratios.empty else None

    @property
    def max_ratio(self) -> float | None:
        return _clean(self.ratios.max()) if not self.ratios.empty else None

    @property
    def envelope(self) -> float:
        if (self.trials["algorithm"] == "onmfl").all():
            return self.onmfl_envelope
        return self.ommfl_envelope

    def fallback_statistics(self) -> dict:
        """Mean S' and S'' cost with standard errors, and the share of paths bought by the fallback."""
        onmfl = self.trials[self.trials["algorithm"] == "onmfl"]
        if onmfl.empty:
            return {}
        paths = onmfl[["rounding_paths", "fallback_paths", "free_paths"]].sum()
        total_paths = paths.sum()
        return {
            "mean_rounding_cost": _clean(onmfl["rounding_cost"].mean()),
            "sem_rounding_cost": _clean(onmfl["rounding_cost"].sem()),
            "mean_fallback_cost": _clean(onmfl["fallback_cost"].mean()),
            "sem_fallback_cost": _clean(onmfl["fallback_cost"].sem()),
            "rounding_paths": int(paths["rounding_paths"]),
            "fallback_paths": int(paths["fallback_paths"]),
            "free_paths": int(paths["free_paths"]),
            "fallback_path_share": _clean(paths["fallback_paths"] / total_paths) if total_paths else 0.0,
        }

    def summary(self) -> dict:
        max_ratio = self.max_ratio
        return {
            "trials": len(self.trials),
            "trials_with_oracle": len(self.ratios),
            "mean_ratio": self.mean_ratio,
            "sem_ratio": _clean(self.ratios.sem()) if len(self.ratios) > 1 else None,
            "max_ratio": max_ratio,
            "mean_paid": _clean(self.trials["paid"].mean()),
            "envelope": self.envelope,
            "envelope_quotient": max_ratio / self.envelope if max_ratio is not None and self.envelope else None,
            "onmfl_envelope": self.onmfl_envelope,
            "ommfl_envelope": self.ommfl_envelope,
            **self.fallback_statistics(),
        }

    def to_csv(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.trials.to_csv(path, index=False)
        return path

    def dump_summary(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.summary(), indent=2) + "\n", encoding="utf-8")
        return path
