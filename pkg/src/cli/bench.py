# src/cli/bench.py
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from src.config.settings import Settings
from src.separability.thresholds import SeparabilityStatus, check, ppt_boundary
from src.states.demo_states import random_psd
from src.states.quantum_states import DimSpec, MixedState
from src.utils.performance_decorator import check_memory_budget

logger = logging.getLogger(__name__)

AGREEMENT_SLACK = 1e-8
REPORT_DIGITS = 12

COUNT_KEYS = {
    SeparabilityStatus.SEPARABLE.value: "separable_certified",
    SeparabilityStatus.ENTANGLED.value: "entangled_certified",
    SeparabilityStatus.INCONCLUSIVE.value: "inconclusive"
}

RECORD_FIELDS = ["index", "dims", "K", "lambda", "lambda_star", "lambda_bar",
                 "lambda_ppt", "verdict", "criterion", "ppt_agrees"]


@dataclass
class BenchReport:
    """
    Outcome of a seeded benchmark comparing the cone criterion with the PPT oracle
    """
    seed: int
    instances: int
    dims: Tuple[int, int]
    counts: Dict[str, int]
    ppt_agreement_rate: float
    k1_agreement_rate: float
    records: List[Dict] = field(default_factory=list)

    def to_dict(self) -> Dict:
        # field order is part of the report format
        return {
            "seed": self.seed,
            "instances": self.instances,
            "dims": list(self.dims),
            "counts": {key: self.counts[key] for key in COUNT_KEYS.values()},
            "ppt_agreement_rate": self.ppt_agreement_rate,
            "k1_agreement_rate": self.k1_agreement_rate,
            "records": [{key: record[key] for key in RECORD_FIELDS} for record in self.records]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.records, columns=RECORD_FIELDS)
        frame["dims"] = frame["dims"].apply(lambda dims: "x".join(str(d) for d in dims))
        return frame

    def write(self, path):
        Path(path).write_text(self.to_json(), encoding="utf-8")
        logger.info("bench report written to %s", path)

    def write_csv(self, path):
        self.to_frame().to_csv(path, index=False)
        logger.info("bench table written to %s", path)


def _rounded(value: Optional[float]) -> Optional[float]:
    if value is None or not np.isfinite(value):
        return None
    return round(float(value), REPORT_DIGITS)


def _agrees(status: str, lam: Optional[float], lambda_ppt: float) -> Optional[bool]:
    """Whether a decided verdict matches the PPT oracle at lam; None when undecided"""
    if lam is None or status == SeparabilityStatus.INCONCLUSIVE.value:
        return None
    if status == SeparabilityStatus.SEPARABLE.value:
        return lam <= lambda_ppt + AGREEMENT_SLACK
    return lam > lambda_ppt - AGREEMENT_SLACK


def evaluate_instance(index: int, dims: Tuple[int, int], M1: np.ndarray, M2: np.ndarray,
                      E: np.ndarray, lam: float, settings: Settings) -> Dict:
    """Run check() and the PPT oracle on (1 - lam) M1 (x) M2 + lam E"""
    spec = DimSpec(dims)
    C = MixedState(spec, np.kron(M1, M2))
    boundary = MixedState(spec, E)
    rho = MixedState(spec, (1 - lam) * C.matrix + lam * boundary.matrix)

    verdict = check(rho, centre_factors=(M1, M2), tol=settings.rank_tol, psd_tol=settings.psd_tol)
    lambda_ppt = ppt_boundary(C, boundary, psd_tol=settings.psd_tol)
    status = verdict.status.value
    return {
        "index": index,
        "dims": list(dims),
        "K": verdict.K,
        "lambda": _rounded(verdict.lam),
        "lambda_star": _rounded(verdict.lambda_star),
        "lambda_bar": _rounded(verdict.lambda_bar),
        "lambda_ppt": _rounded(lambda_ppt),
        "verdict": status,
        "criterion": verdict.criterion,
        "ppt_agrees": _agrees(status, verdict.lam, lambda_ppt)
    }


class BenchRunner:
    """
    Seeded random instances (1 - lam) M1 (x) M2 + lam E with Ginibre marginals and a
    rank-K boundary state E, K drawn from 1..min(3, N1 N2 - 1)
    """

    def __init__(self, dims: Tuple[int, int], instances: int, seed: int,
                 settings: Optional[Settings] = None):
        if instances < 1:
            raise ValueError(f"instances must be >= 1, got {instances}")
        self.dims = DimSpec(tuple(dims))
        if not self.dims.is_bipartite():
            raise ValueError(f"bench needs two local dimensions, got {self.dims.dims}")
        self.instances = int(instances)
        self.seed = int(seed)
        self.settings = settings or Settings()
        check_memory_budget(self.dims.total, self.settings.max_total_dim)

    def draw_instances(self) -> List[Tuple]:
        """All random parameters, drawn in the parent process in instance order"""
        rng = np.random.default_rng(self.seed)
        N1, N2 = self.dims.dims
        total = self.dims.total
        max_rank = max(1, min(3, total - 1))
        drawn = []
        for index in range(self.instances):
            M1 = random_psd(N1, rng)
            M2 = random_psd(N2, rng)
            K = int(rng.integers(1, max_rank + 1))
            E = random_psd(total, rng, rank=K)
            lam = float(rng.uniform(0.0, 1.0))
            drawn.append((index, (N1, N2), M1, M2, E, lam))
        return drawn

    def run(self) -> BenchReport:
        drawn = self.draw_instances()
        records = Parallel(n_jobs=self.settings.n_jobs)(
            delayed(evaluate_instance)(*params, self.settings) for params in drawn
        )

        counts = {key: 0 for key in COUNT_KEYS.values()}
        for record in records:
            counts[COUNT_KEYS[record["verdict"]]] += 1

        report = BenchReport(
            seed=self.seed,
            instances=self.instances,
            dims=self.dims.dims,
            counts=counts,
            ppt_agreement_rate=_agreement_rate(records),
            k1_agreement_rate=_agreement_rate([r for r in records if r["K"] == 1]),
            records=list(records)
        )
        logger.info("bench: %s, agreement %.4f", counts, report.ppt_agreement_rate)
        return report


def _agreement_rate(records: List[Dict]) -> float:
    """Share of decided instances that match the PPT oracle; 1.0 when none is decided"""
    decided = [r["ppt_agrees"] for r in records if r["ppt_agrees"] is not None]
    if not decided:
        return 1.0
    return round(sum(decided) / len(decided), REPORT_DIGITS)
