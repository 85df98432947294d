"""Collects one status line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def report(cid: int, ok: bool | None, detail: str, seconds: float) -> str:
    status = {True: "PASS", False: "FAIL", None: "SKIP"}[ok]
    line = f"[{status}] C{cid:<2} {detail}  ({seconds:.1f}s)"
    LINES.append(line)
    print(line)
    return line
