"""Profile evolution: version store, blame, revision, evolving loop."""

from .store import Revision, VersionStore
from .evolve import diagnose, evolving_run, revise_segment

__all__ = ["Revision", "VersionStore", "diagnose", "evolving_run",
           "revise_segment"]
