import logging
from contextlib import contextmanager

from asgiref.local import Local

_run_ctx = Local()


def get_current_run():
    return getattr(_run_ctx, "run", None)


def describe_run(run):
    if run is None:
        return "-"
    name, seed = run
    return f"{name}#{seed}"


@contextmanager
def run_context(instance_name, seed):
    """Bind (instance, seed) to the current thread for the duration of a run"""
    previous = get_current_run()
    _run_ctx.run = (instance_name, seed)
    try:
        yield
    finally:
        if previous is None:
            if hasattr(_run_ctx, "run"):
                del _run_ctx.run
        else:
            _run_ctx.run = previous


class RunContextFilter(logging.Filter):
    def filter(self, record):
        record.run = describe_run(get_current_run())
        return True
