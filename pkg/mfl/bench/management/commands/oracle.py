from mfl.core.validators import check_instance
from mfl.oracle.exhaustive import optimal_offline, prefix_opts

from ._base import MflCommand, add_instance_argument, read_instance


class Command(MflCommand):
    help = "Compute the exact offline optimum of an instance."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_instance_argument(parser)
        parser.add_argument("--oracle-cap", type=int, default=None, help="Largest m to enumerate.")
        parser.add_argument("--prefixes", action="store_true", help="Also report Opt of every arrival prefix.")

    def run(self, **options):
        inst = read_instance(options)
        check_instance(inst)
        result = optimal_offline(inst, cap=options["oracle_cap"])
        document = result.as_dict()
        if options["prefixes"]:
            document["prefix_opts"] = prefix_opts(inst, cap=options["oracle_cap"])
        self.done(self.write_json(f"{options['instance'].stem}-oracle.json", document))
