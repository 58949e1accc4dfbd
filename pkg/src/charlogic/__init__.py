"""Character profiles compiled to executable profile-logic programs.

The package turns free-text character profiles into small executable
programs (one per profile segment), runs them against narrative scenes
through a tri-valued condition oracle, composes role-play responses from
the triggered statements, and evolves the programs from scoring feedback.
"""

__version__ = "0.1.0"
