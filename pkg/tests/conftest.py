from __future__ import annotations

from hypothesis import HealthCheck, settings

# Property tests share one conservative profile: no wall-clock deadline
# (CI machines vary) and a bounded example count so the suite stays fast.
settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")
