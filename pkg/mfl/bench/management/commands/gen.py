from mfl.core.reductions import osmc_to_onmfl
from mfl.core.serialization import dump_instance
from mfl.core.validators import check_instance

from ...generators import gen_euclidean, gen_nonmetric, gen_osmc
from ._base import MflCommand


class Command(MflCommand):
    help = "Generate a seeded instance file (euclidean, nonmetric, or a reduced set multicover instance)."

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--kind", choices=["euclidean", "nonmetric", "osmc"], default="euclidean")
        parser.add_argument("--n", type=int, required=True, help="Clients (universe size for osmc).")
        parser.add_argument("--m", type=int, required=True, help="Facilities (subsets for osmc).")
        parser.add_argument("--k", type=int, default=1)
        parser.add_argument("--k-vector", action="store_true", help="Draw k_i uniformly from 1..k per client.")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--box-size", type=float, default=None)
        parser.add_argument("--density", type=float, default=None)
        parser.add_argument("--name", default=None, help="File name (default derived from the arguments).")

    def run(self, **options):
        kind, n, m, k, seed = options["kind"], options["n"], options["m"], options["k"], options["seed"]
        density = options["density"]
        if kind == "euclidean":
            inst = gen_euclidean(n, m, k, seed, box_size=options["box_size"], k_vector=options["k_vector"])
        elif kind == "nonmetric":
            inst = gen_nonmetric(n, m, k, seed, density=density or 1.0, k_vector=options["k_vector"])
        else:
            inst, _mapping = osmc_to_onmfl(gen_osmc(n, m, k, seed, density=density or 0.5))
        check_instance(inst)

        name = options["name"] or f"{kind}-n{n}-m{m}-k{k}-s{seed}.json"
        self.done(dump_instance(inst, self.out_dir / name))
