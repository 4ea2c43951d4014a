"""Global numeric tolerance shared by every equality predicate."""

import os

DEFAULT_TOL = 1e-9
ENV_VAR = "HYPWALLS_TOL"


def _from_env():
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        return DEFAULT_TOL
    return value if value > 0 else DEFAULT_TOL


_tol = _from_env()


def get_tol(tol=None):
    """Return ``tol`` when given, otherwise the configured global tolerance."""
    if tol is None:
        return _tol
    return float(tol)


def set_tol(tol):
    global _tol
    tol = float(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    _tol = tol


def reset_tol():
    global _tol
    _tol = _from_env()
