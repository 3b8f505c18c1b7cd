from mfl.core.validators import check_instance

from ...reports import TrialReport
from ...runner import run_trial
from ._base import (
    MflCommand,
    add_algorithm_arguments,
    add_instance_argument,
    algorithm_config,
    file_label,
    read_instance,
)


class Command(MflCommand):
    help = "Run one seeded trial and write its trace, trial row and summary."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_instance_argument(parser)
        add_algorithm_arguments(parser)
        parser.add_argument("--seed", type=int, default=0)

    def run(self, **options):
        inst = read_instance(options)
        check_instance(inst)
        config = algorithm_config(options)
        seed = options["seed"]

        outcome = run_trial(inst, config=config, seed=seed)
        stem = f"{options['instance'].stem}-{file_label(config)}-s{seed}"
        report = TrialReport.from_rows([{"order": 0, **outcome.row}], inst)

        summary = {"trial": outcome.row, "solution": outcome.solution.as_dict()}
        if outcome.decomposition is not None:
            summary["decomposition"] = outcome.decomposition.as_dict()

        self.done(
            outcome.trace.dump(self.out_dir / f"{stem}.trace.jsonl"),
            report.to_csv(self.out_dir / f"{stem}.csv"),
            self.write_json(f"{stem}.json", summary),
        )
