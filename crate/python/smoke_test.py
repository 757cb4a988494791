"""Smoke test for the pyaemfp extension.

Build it first:
    cargo build -p aemfp-py --release --features extension-module
    cp target/release/libpyaemfp.so python/pyaemfp.so
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import pyaemfp

TWO_PARALLEL = "p aemfp 2 2 1\nn 0 s\nn 1 t\na 0 0 1 4\na 1 0 1 10\nh 0 const 1 0 1\n"


def main():
    sol = pyaemfp.solve(TWO_PARALLEL)
    assert sol.method == "parametric", sol.method
    assert Fraction(sol.opt_value) == 9
    assert sol.lambdas == ["4"]
    assert [Fraction(f) for f in sol.flow] == [4, 5]
    assert pyaemfp.verify(TWO_PARALLEL, sol.text) == []
    assert pyaemfp.verify(TWO_PARALLEL, "flow 0 2\nflow 1 8\n")

    assert pyaemfp.oracle(TWO_PARALLEL) == "9"
    assert pyaemfp.breakpoints(TWO_PARALLEL).splitlines()[0] == "lambda,F,slope"

    inst = pyaemfp.random_instance(k=2, seed=7)
    assert Fraction(pyaemfp.solve(inst).opt_value) == Fraction(pyaemfp.oracle(inst))

    gadget, meta = pyaemfp.x3c_gadget("6 2\n1 2 3\n4 5 6\n")
    assert "expected_yes_value 14" in meta
    assert pyaemfp.solve(gadget, integer=True).opt_value == "14"

    try:
        pyaemfp.solve("p aemfp 2 1 0\nn 0 s\n")
    except pyaemfp.SolverError as e:
        assert str(e).startswith("parse"), e
    else:
        raise AssertionError("malformed instance accepted")
    print("pyaemfp smoke test ok")


if __name__ == "__main__":
    main()
