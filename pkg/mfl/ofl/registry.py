from collections.abc import Iterable

import numpy as np

from mfl.core.instance import Facility

from .base import OflAlgorithm
from .greedy import GreedyOfl
from .meyerson import MeyersonOfl

OFL_ALGORITHMS: dict[str, type[OflAlgorithm]] = {
    GreedyOfl.name: GreedyOfl,
    MeyersonOfl.name: MeyersonOfl,
}


def get_ofl_algorithm(name: str, facilities: Iterable[Facility], seed: int | None = None) -> OflAlgorithm:
    try:
        algorithm_class = OFL_ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"Unknown OFL plug-in `{name}`, choose from {sorted(OFL_ALGORITHMS)}.") from None
    return algorithm_class(facilities, rng=np.random.default_rng(seed))
