from mfl.core.validators import check_instance

from ...models import BenchmarkRun
from ...runner import run_batch, sample_orders
from ._base import (
    MflCommand,
    add_algorithm_arguments,
    add_instance_argument,
    algorithm_config,
    file_label,
    read_instance,
)


class Command(MflCommand):
    help = "Run a batch of seeds (optionally over sampled arrival orders) and write the trial table and summary."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_instance_argument(parser)
        add_algorithm_arguments(parser)
        parser.add_argument("--seeds", type=int, default=200, help="Number of seeds.")
        parser.add_argument("--seed-start", type=int, default=0)
        parser.add_argument(
            "--orders",
            type=int,
            default=1,
            help="Arrival orders; 1 keeps the instance order, more are sampled.",
        )
        parser.add_argument("--workers", type=int, default=None, help="Trial processes; defaults to MFL_WORKERS.")
        parser.add_argument("--store", action="store_true", help="Record the batch in the run index.")

    def run(self, **options):
        inst = read_instance(options)
        check_instance(inst)
        config = algorithm_config(options)
        seeds = range(options["seed_start"], options["seed_start"] + options["seeds"])
        orders = None
        if options["orders"] > 1:
            orders = sample_orders(inst, options["orders"], options["seed_start"])

        report = run_batch(inst, config, seeds, orders=orders, workers=options["workers"])
        stem = f"{options['instance'].stem}-{file_label(config)}-bench"
        paths = [
            report.to_csv(self.out_dir / f"{stem}.csv"),
            report.dump_summary(self.out_dir / f"{stem}.json"),
        ]

        if options["store"]:
            run = BenchmarkRun.objects.create(
                instance_hash=inst.content_hash,
                algorithm=config.algorithm.value,
                ofl=config.ofl if config.algorithm != "onmfl" else "",
                k_max=inst.k_max,
                n=inst.n,
                m=inst.m,
                seed_count=len(seeds),
                order_count=options["orders"],
                mean_ratio=report.mean_ratio,
                max_ratio=report.max_ratio,
                envelope=report.envelope,
                output_dir=str(self.out_dir),
            )
            if options["verbosity"] > 1:
                self.stdout.write(f"Stored {run}")
        self.done(*paths)
