from pathlib import Path
from decouple import config


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = config("SECRET_KEY", default="ceop-local-solver-key")

DEBUG = config("DEBUG", cast=bool, default=False)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "rest_framework",
    "ceop",
]

MIDDLEWARE = []


REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": ("rest_framework.renderers.JSONRenderer",),
    "DEFAULT_PARSER_CLASSES": ("rest_framework.parsers.JSONParser",),
    # solution files must not carry NaN/Infinity
    "STRICT_JSON": True,
    "COMPACT_JSON": True,
}


# Solver defaults. Every entry can be overridden per run by a management
# command flag; environment values come in through decouple.
CRASZE = {
    "SEED": config("CRASZE_SEED", cast=int, default=0),
    "JOBS": config("CRASZE_JOBS", cast=int, default=1),
    "EPS": 1e-9,
    "RSZD": {
        "ITERATIONS": 10,
        # None means "no cap" for CEOP; TDDP always caps at the drone count
        "MAX_DEGREE": None,
    },
    "ACS": {
        "ANTS": 40,
        "ITERATIONS": 250,
        "BETA": 2.0,
        "ALPHA": 0.1,
        "RHO": 0.1,
        "Q0": 0.9,
        "EPS_IMPR": 1e-4,
        "MAX_NO_IMPR": 25,
    },
    "ARC_SEARCH": {
        "ROUNDS": 5,
        "MAX_SWEEPS": 50,
        "TOL": 1e-4,
    },
    "PSO": {
        "PARTICLES": 40,
        "ITERATIONS": 100,
        "C1": 1.33,
        "C2": 1.33,
        "OMEGA_MIN": 0.4,
        "OMEGA_MAX": 0.9,
        "EPS_IMPR": 1e-4,
        "MAX_NO_IMPR": 5,
        "IACS_MAX_NO_IMPR": 13,
        "TIME_CAP_S": config("CRASZE_TIME_CAP_S", cast=float, default=600.0),
    },
    "TDDP": {
        "V_DRONE": 90.0,  # km/h
        "V_TRUCK": 60.0,  # km/h
        "T_SERV": 5.0 / 60.0,  # hours
        "N_DRONES": 5,
        "R_DRONE": 10.0,  # km
        "LAMBDA_MIN": 0.8,
        "LAMBDA_MAX": 1.0,
        "PRIZE_RANGE": (0.1, 0.9),
    },
    "BUDGET_LEVELS": {
        "CEOP": (0.9, 0.6, 0.3),
        "TDDP": (0.6, 0.9, 1.2),
    },
    "ORACLE": {
        "MAX_ZONES": 8,
        "BOUNDARY_SAMPLES": 720,
        "GRID_SAMPLES": 50,
        "MONTE_CARLO_SAMPLES": 10_000,
    },
    "GENERATOR": {
        "EXTENT": 100.0,
        "PRIZE_RANGE": (1, 12),
        "BUDGET_LEVEL": 0.9,
    },
}


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "filters": {
        "run_context": {
            "()": "ceop.context.RunContextFilter",
        },
    },
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name} [{run}] {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "filters": ["run_context"],
            "formatter": "verbose",
        },
    },
    "loggers": {
        "ceop": {
            "handlers": ["console"],
            "level": config("CRASZE_LOG_LEVEL", default="INFO"),
            "propagate": False,
        },
    },
}


TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [],
        },
    },
]


# Database
# https://docs.djangoproject.com/en/6.0/ref/settings/#databases

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": config("DB_NAME", default=str(BASE_DIR / "db.sqlite3")),
    }
}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Internationalization
# https://docs.djangoproject.com/en/6.0/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True
