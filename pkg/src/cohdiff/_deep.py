"""Run deeply recursive computations on a thread with a large stack."""

from __future__ import annotations

import functools
import sys
import threading

STACK_BYTES = 512 * 1024 * 1024
RECURSION_LIMIT = 200_000

_local = threading.local()


def deep(fn):
    """Decorator: evaluate ``fn`` on a big-stack thread unless already on one."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        if getattr(_local, "active", False):
            return fn(*args, **kwargs)
        box: dict = {}

        def target():
            _local.active = True
            try:
                box["value"] = fn(*args, **kwargs)
            except BaseException as exc:  # re-raised in the caller
                box["error"] = exc

        if sys.getrecursionlimit() < RECURSION_LIMIT:
            sys.setrecursionlimit(RECURSION_LIMIT)
        old = threading.stack_size()
        threading.stack_size(STACK_BYTES)
        try:
            th = threading.Thread(target=target)
            th.start()
        finally:
            threading.stack_size(old)
        th.join()
        if "error" in box:
            raise box["error"]
        return box["value"]

    return wrapper
