"""Reproducible campaign harness: config, execution, persistence, figures and CLI."""

from aurora.campaign.config import CampaignConfig, parse_config
from aurora.campaign.results import load_result, read_records, write_results
from aurora.campaign.runner import ResultSet, TrialRecord, run_campaign

__all__ = [
    "CampaignConfig",
    "parse_config",
    "load_result",
    "read_records",
    "write_results",
    "ResultSet",
    "TrialRecord",
    "run_campaign",
]
