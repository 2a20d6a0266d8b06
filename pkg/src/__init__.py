"""NPCA throughput toolkit: analytic model, slot-level simulator and experiment harness."""

__version__ = "0.3.0"
