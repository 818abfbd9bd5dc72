"""Search-based falsification of STL requirements."""

from stlf.falsify.campaign import CampaignReport, RequirementReport, falsify_campaign
from stlf.falsify.search import (
    Dim,
    SearchConfig,
    SearchResult,
    SearchSpace,
    fitness,
    hill_climb,
    safe_hill_climb,
    tweak,
)

__all__ = [
    "CampaignReport",
    "RequirementReport",
    "falsify_campaign",
    "Dim",
    "SearchConfig",
    "SearchResult",
    "SearchSpace",
    "fitness",
    "hill_climb",
    "safe_hill_climb",
    "tweak",
]
