from hypothesis import settings

# Deterministic property tests: no wall-clock deadlines (some examples
# iterate a few thousand map steps) and derandomized example generation.
settings.register_profile("trichain", deadline=None, derandomize=True)
settings.load_profile("trichain")
