from mfl.core.validators import check_instance

from ...runner import worst_order_search
from ._base import (
    MflCommand,
    add_algorithm_arguments,
    add_instance_argument,
    algorithm_config,
    file_label,
    read_instance,
)


class Command(MflCommand):
    help = "Search the arrival order with the highest mean competitive ratio."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_instance_argument(parser)
        add_algorithm_arguments(parser)
        parser.add_argument("--seeds", type=int, default=10)
        parser.add_argument("--seed-start", type=int, default=0)
        parser.add_argument(
            "--samples",
            type=int,
            default=None,
            help="Sampled orders when n > 8 (default: MFL_WORST_ORDER_SAMPLES).",
        )

    def run(self, **options):
        inst = read_instance(options)
        check_instance(inst)
        config = algorithm_config(options)
        seeds = range(options["seed_start"], options["seed_start"] + options["seeds"])

        worst = worst_order_search(inst, config, seeds, samples=options["samples"], sample_seed=options["seed_start"])
        stem = f"{options['instance'].stem}-{file_label(config)}-worst"
        self.done(self.write_json(f"{stem}.json", worst.as_dict()))
