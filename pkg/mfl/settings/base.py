"""
Django settings for the mfl project.

For more information on this file, see
https://docs.djangoproject.com/en/6.0/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/6.0/ref/settings/
"""

from pathlib import Path
import environ

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

env = environ.Env(
    # set casting, default value
    DEBUG=(bool, False),
    MFL_ORACLE_CAP=(int, 20),
    MFL_EUCLIDEAN_BOX_SIZE=(float, 100.0),
    MFL_WORST_ORDER_SAMPLES=(int, 200),
    MFL_WORKERS=(int, 0),
    MFL_LOG_LEVEL=(str, "INFO"),
)
environ.Env.read_env(BASE_DIR.parent / '.env')

RUN_DIR = BASE_DIR.parent / "run"
RUN_DIR.mkdir(parents=True, exist_ok=True)

DEBUG = env('DEBUG')
SECRET_KEY = env('SECRET_KEY', default="django-insecure-mfl-benchmark-harness")
ALLOWED_HOSTS = env.list('ALLOWED_HOSTS', default=[])

# Application definition

DJANGO_APPS = [
    'django.contrib.contenttypes',
]
LOCAL_APPS = [
    'mfl.core',
    'mfl.flowgraph',
    'mfl.onmfl',
    'mfl.ofl',
    'mfl.ommfl',
    'mfl.oracle',
    'mfl.bench',
]

INSTALLED_APPS = DJANGO_APPS + LOCAL_APPS


# Database
# Only the benchmark run index lives here, see mfl.bench.models

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': RUN_DIR / 'db.sqlite3',
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LANGUAGE_CODE = 'en'

TIME_ZONE = 'Europe/Berlin'

USE_I18N = False

USE_TZ = True


# Logging
# https://docs.djangoproject.com/en/6.0/topics/logging/

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "mfl": {
            "handlers": ["console"],
            "level": env("MFL_LOG_LEVEL"),
            "propagate": False,
        },
    },
}


# MFL SETTINGS
# Results of gen/run/bench/worst/oracle/replay go here unless --out is given
MFL_OUTPUT_DIR = Path(env("MFL_OUTPUT_DIR", default=str(RUN_DIR / "results")))

# The exact oracle enumerates 2^m facility subsets
MFL_ORACLE_CAP = env("MFL_ORACLE_CAP")

# Relative tolerance for every inequality checked at runtime
MFL_TOLERANCE = 1e-9

# Instance generators
MFL_EUCLIDEAN_BOX_SIZE = env("MFL_EUCLIDEAN_BOX_SIZE")
MFL_OPENING_COST_RANGE = tuple(env.list("MFL_OPENING_COST_RANGE", cast=float, default=[1.0, 100.0]))
MFL_CONNECTION_COST_RANGE = tuple(env.list("MFL_CONNECTION_COST_RANGE", cast=float, default=[1.0, 100.0]))

# Arrival orders sampled by the worst-order search when n! exceeds 8!
MFL_WORST_ORDER_SAMPLES = env("MFL_WORST_ORDER_SAMPLES")

# Processes per benchmark batch: 0 runs trials in-process, negative uses every CPU
MFL_WORKERS = env("MFL_WORKERS")

# Metric check: exhaustive up to n*m client/facility pairs, sampled clients above
MFL_METRIC_CHECK_EXHAUSTIVE_LIMIT = 10_000
MFL_METRIC_CHECK_SAMPLE_CLIENTS = 100
