"""Run every acceptance criterion outside pytest and print one PASS/FAIL line each."""
import sys
from pathlib import Path

TESTS = Path(__file__).resolve().parent.parent / "tests"
sys.path.insert(0, str(TESTS))

import test_acceptance  # noqa: E402

if __name__ == "__main__":
    sys.exit(test_acceptance.main())
