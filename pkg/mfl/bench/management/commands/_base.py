import json
import sys
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand

from mfl.core.exceptions import MflError
from mfl.core.serialization import load_instance

from ...runner import Algorithm, AlgorithmConfig

ERROR_EXIT_CODE = 2


class MflCommand(BaseCommand):
    """
    Base of the mfl commands: a common ``--out`` option and failures
    reported as a JSON document on stderr with exit status 2.
    """

    def add_arguments(self, parser):
        parser.add_argument(
            "--out",
            type=Path,
            default=None,
            help="Output directory (default: MFL_OUTPUT_DIR).",
        )

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    def handle(self, *args, **options):
        self.out_dir = Path(options["out"] or settings.MFL_OUTPUT_DIR)
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            self.run(**options)
        except (MflError, ValidationError, OSError, ValueError) as exc:
            self.fail(exc)

    def run(self, **options):
        raise NotImplementedError

    def fail(self, exc: Exception):
        if isinstance(exc, ValidationError):
            codes = [e.code for e in exc.error_list if e.code] if hasattr(exc, "error_list") else []
            code = codes[0] if codes else "invalid_instance"
            message = "; ".join(exc.messages)
        else:
            code = getattr(exc, "code", None) or type(exc).__name__.lower()
            message = str(exc)
        document = {"error": code, "message": message, "command": self.command_name}
        self.stderr.write(json.dumps(document))
        sys.exit(ERROR_EXIT_CODE)

    def write_json(self, name: str, data) -> Path:
        path = self.out_dir / name
        path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        return path

    def done(self, *paths: Path):
        for path in paths:
            self.stdout.write(str(path))


def add_instance_argument(parser):
    parser.add_argument("--instance", type=Path, required=True, help="Instance JSON file.")


def add_algorithm_arguments(parser):
    parser.add_argument("--algo", choices=[a.value for a in Algorithm], default=Algorithm.ONMFL.value)
    parser.add_argument("--ofl", choices=["greedy", "meyerson"], default="greedy", help="OFL plug-in.")
    parser.add_argument("--oracle-cap", type=int, default=None, help="Largest m for the exact oracle.")


def algorithm_config(options) -> AlgorithmConfig:
    return AlgorithmConfig(
        algorithm=Algorithm(options["algo"]),
        ofl=options["ofl"],
        oracle_cap=options["oracle_cap"],
    )


def read_instance(options):
    return load_instance(options["instance"])


def file_label(config: AlgorithmConfig) -> str:
    return config.label.replace(":", "-")
