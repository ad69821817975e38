from __future__ import annotations

from pathlib import Path

from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("repo")

ROOT = Path(__file__).resolve().parent.parent
WORKED = ROOT / "worked"

