"""
Prometheus Metrics for Check Outcomes
"""
from pathlib import Path
from typing import Union

from loguru import logger
from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

REGISTRY = CollectorRegistry()

CHECKS_TOTAL = Counter(
    "vee_insight_checks_total", "Checks evaluated", ["check", "outcome"], registry=REGISTRY
)
CHECK_DURATION = Histogram(
    "vee_insight_check_duration_seconds",
    "Wall time per CLI command",
    ["command"],
    buckets=[0.01, 0.1, 0.5, 1, 5, 15, 60],
    registry=REGISTRY,
)
PLANES_ENUMERATED = Gauge(
    "vee_insight_planes_enumerated", "Planes found by the last enumeration", registry=REGISTRY
)


def record_check(check: str, passed: bool) -> None:
    CHECKS_TOTAL.labels(check=check, outcome="pass" if passed else "fail").inc()


def set_planes_enumerated(count: int) -> None:
    PLANES_ENUMERATED.set(count)


def write_metrics(path: Union[str, Path]) -> None:
    """Export the registry in the Prometheus textfile format"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(path), REGISTRY)
    logger.debug(f"Metrics written to {path}")
