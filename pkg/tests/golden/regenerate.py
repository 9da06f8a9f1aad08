"""Rewrite the golden reports from the current CLI.  Run after an intended output change."""
from __future__ import annotations

import contextlib
import io
import json
from pathlib import Path

from svbider.cli import main

HERE = Path(__file__).parent


def render_case(argv: list[str]) -> tuple[int, str]:
    argv = [a.replace("GOLDEN", str(HERE)) for a in argv]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main(argv)
    return code, buf.getvalue()


def main_regen() -> None:
    cases = json.loads((HERE / "cases.json").read_text())
    for name, case in sorted(cases.items()):
        code, out = render_case(case["argv"])
        assert code == case["exit"], (name, code)
        (HERE / f"{name}.out").write_text(out)
        print(name, code)


if __name__ == "__main__":
    main_regen()
