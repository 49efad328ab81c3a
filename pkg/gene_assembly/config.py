"""
Default limits for enumeration, search and verification campaigns.
"""

import os
from dataclasses import dataclass


# ============================================================================
# LIMITS
# ============================================================================

EXHAUSTIVE_CAP = 3            # largest k for exhaustive string enumeration
ENUMERATION_CAP = 9           # vertex count limit for ordering enumeration
SEARCH_STATE_CAP = 500_000    # states visited before a search gives up
DEFAULT_SAMPLE_SEED = 2008
DEFAULT_WORKERS = max(1, min(8, os.cpu_count() or 1))
CHUNK_SIZE = 512              # strings per worker task


@dataclass(frozen=True)
class OracleSettings:
    """Caps used by the oracle; override per call or from the command line."""
    exhaustive_cap: int = EXHAUSTIVE_CAP
    enumeration_cap: int = ENUMERATION_CAP
    state_cap: int = SEARCH_STATE_CAP


DEFAULT_SETTINGS = OracleSettings()
