import time


def pytest_configure(config):
    config._suite_t0 = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    # Whole-battery wall-time budget; a green run that crawls is a failure.
    elapsed = time.perf_counter() - session.config._suite_t0
    print(f"\nsuite wall time: {elapsed:.1f}s (budget 300s)")
    if elapsed > 300.0 and session.exitstatus == 0:
        session.exitstatus = 1
