"""Smoke test for the Python extension.

Build and place the module next to this file first:

    cargo build --release -p hermclass-py --features extension-module
    cp target/release/libhermclass_py.so python/hermclass.so
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import hermclass  # noqa: E402

QUADRATIC = """
unknowns = ["x"]
parameters = ["y1", "y2"]
equations = ["x^2 + y1*x + y2"]
"""


def main():
    result = json.loads(hermclass.classify(QUADRATIC, seed=3))
    minors = {m["poly"] for m in result["minors"]}
    assert "y1^2 - 4*y2" in minors, minors
    counts = sorted({r["count"] for r in result["regions"]})
    assert counts == [0, 2], counts

    assert hermclass.count_solutions(QUADRATIC, ["0", "-1"]) == 2
    assert hermclass.count_solutions(QUADRATIC, ["0", "1/4"]) == 0

    text = hermclass.random_system(1, 1, 1, 2, seed=5)
    assert text == hermclass.random_system(1, 1, 1, 2, seed=5)
    practical = json.loads(hermclass.classify(text, variant="determinants-first"))
    assert practical["variant"] == "determinants-first"

    try:
        hermclass.classify('unknowns = ["x"]\nequations = ["x +* 1"]\n')
    except ValueError as e:
        assert "column" in str(e), e
    else:
        raise AssertionError("malformed expression accepted")

    print("hermclass", hermclass.__version__, "ok")


if __name__ == "__main__":
    main()
