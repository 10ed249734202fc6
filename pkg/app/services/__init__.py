"""Computation modules and the service classes the command handlers use.

Service classes are resolved lazily so that `app.models.schemas` can import
the computation modules without pulling the services back in.
"""

import importlib

_SERVICES = {
    "HomService": "hom_service",
    "CharacterService": "character_service",
    "VerifyService": "verify_service",
    "CharExpService": "charexp_service",
}

__all__ = list(_SERVICES)


def __getattr__(name):
    if name in _SERVICES:
        module = importlib.import_module(f"{__name__}.{_SERVICES[name]}")
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
