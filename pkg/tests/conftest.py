import sys
from pathlib import Path

import hypothesis

sys.path.insert(0, str(Path(__file__).parent))

hypothesis.settings.register_profile(
    "default", max_examples=50, deadline=None)
hypothesis.settings.load_profile("default")
