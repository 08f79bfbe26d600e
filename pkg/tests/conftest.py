"""Shared test configuration: a hypothesis profile without deadlines
(numerical properties have long per-example tails on cold caches)."""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "numeric",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")
