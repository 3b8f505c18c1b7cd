from pathlib import Path

from ...trace import RunTrace, replay
from ._base import MflCommand, add_instance_argument, read_instance


class Command(MflCommand):
    help = "Rebuild the final solution of a trace without re-running the algorithm."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_instance_argument(parser)
        parser.add_argument("--trace", type=Path, required=True, help="Trace JSONL file.")

    def run(self, **options):
        inst = read_instance(options)
        trace = RunTrace.load(options["trace"])
        solution = replay(trace, inst)
        name = options["trace"].name.removesuffix(".jsonl").removesuffix(".trace")
        self.done(self.write_json(f"{name}.replay.json", solution.as_dict()))
