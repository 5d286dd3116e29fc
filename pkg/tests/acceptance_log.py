"""Collects one verdict line per acceptance criterion for the terminal summary."""
RESULTS = []


def record(number, title, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    line = f"criterion {number:>2} {status}: {title}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    return passed


def skip(number, title, reason):
    line = f"criterion {number:>2} SKIP: {title} ({reason})"
    RESULTS.append(line)
    print(line)
