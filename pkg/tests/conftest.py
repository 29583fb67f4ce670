import os

from hypothesis import HealthCheck, settings

# Exact-arithmetic examples have very uneven costs (a single unlucky draw can
# dominate a run), so the per-example deadline is disabled and the example
# budget is kept moderate; raise it locally via HYPOTHESIS_PROFILE=thorough.
settings.register_profile(
    "suite", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.register_profile(
    "thorough", deadline=None, max_examples=300,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "suite"))
