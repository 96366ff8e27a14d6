"""Rewrite tests/golden from the bundled data files.

Run after an intentional output change and review the diff by hand.
"""

from __future__ import annotations

import contextlib
import io
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from chanmetric import cli

DATA = ROOT / "chanmetric" / "data"
GOLDEN = ROOT / "tests" / "golden"

CASES = {
    "order_desc.txt": ["order", "--desc", "rank_example.txt"],
    "order_asc.txt": ["order", "--asc", "rank_example.txt"],
    "metrize_cyclic.txt": ["metrize", "channel_cyclic.txt"],
    "metrize_distance.txt": ["metrize", "channel_metrizable.txt"],
    "metrize_metric.txt": ["metrize", "--mode", "metric", "channel_metrizable.txt"],
    "setpattern_cap.txt": ["setpattern", "solve", "--cap", "--graded", "cap_pattern.txt"],
    "setpattern_sym.txt": ["setpattern", "solve", "--sym", "--graded", "sym_pattern.txt"],
    "setpattern_sym_scaled.txt": ["setpattern", "solve", "--sym", "--graded", "sym_pattern_scaled.txt"],
    "embed_weight.txt": ["embed", "--weight", "weight_f23.txt"],
    "embed_minimal.txt": ["embed", "--weight", "weight_f23.txt", "--minimal"],
    "verify_h12.txt": ["verify-embed", "embedding_h12.txt", "--weight", "weight_f23.txt"],
}


def _resolve(argv: list[str]) -> list[str]:
    return [str(DATA / arg) if (DATA / arg).is_file() else arg for arg in argv]


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, argv in CASES.items():
        buffer = io.StringIO()
        with contextlib.redirect_stdout(buffer):
            code = cli.main(_resolve(argv))
        if code == cli.EXIT_ERROR:
            raise SystemExit(f"{name}: command failed")
        (GOLDEN / name).write_text(buffer.getvalue(), encoding="utf-8")
        print(f"wrote {name} (exit {code})")


if __name__ == "__main__":
    main()
