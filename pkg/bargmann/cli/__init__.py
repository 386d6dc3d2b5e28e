"""Scenario runner and command-line interface."""
from .app import build_parser, main
from .runner import caustic_scan, run_scenario, transform_demo, write_table

__all__ = ["build_parser", "caustic_scan", "main", "run_scenario", "transform_demo", "write_table"]
