"""Stokes geometry and asymptotic solutions near an irregular singularity."""

import json

from ._core import (
    AtlasError,
    DomainError,
    InputError,
    SolverError,
    VerificationError,
    formal_reduce,
    report_schema,
    stokes_directions,
)
from ._core import run as _run

__all__ = [
    "AtlasError",
    "DomainError",
    "InputError",
    "SolverError",
    "VerificationError",
    "formal_reduce",
    "report_schema",
    "run",
    "stokes_directions",
]


def run(command, spec, tol=None, jobs=None):
    """Run an atlas command on a spec given as a dict or a JSON string; returns the report dict."""
    text = spec if isinstance(spec, str) else json.dumps(spec)
    return json.loads(_run(command, text, tol, jobs))
