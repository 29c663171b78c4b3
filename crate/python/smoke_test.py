"""Smoke test for the pydrinfeld extension module.

Build and run from the repository root:

    cargo build --release -p drinfeld-ext-py
    cp target/release/libpydrinfeld.so python/pydrinfeld.so
    python3 python/smoke_test.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pydrinfeld as pd


def main():
    f2 = pd.Field(2)
    assert (f2.p, f2.q) == (2, 2)
    assert f2.element("(T^2+T)/(T)") == "1+T"

    tau = pd.SkewPoly(f2, "tau")
    theta = pd.SkewPoly(f2, "T")
    assert str(tau * theta) == "T^2*tau"
    assert (tau ** 3).degree == 3
    assert tau.apply("T") == "T^2"

    e = pd.DrinfeldModule(f2, ["T", "1"])
    assert e.rank == 2
    assert str(e.phi_t) == "T + T*tau + tau^2"

    pi, dual = e.dual()
    assert pi.phi_t == [["T", "0"], ["tau", "T + T*tau + tau^2"]]
    assert dual.dim == 1
    xi = e.bidual()
    assert xi.phi_t[1][1] == str(e.phi_t)
    assert pd.TModule.from_json(pi.to_json()) == pi

    c = pd.DrinfeldModule.carlitz(f2).as_tmodule()
    delta = pd.Biderivation(e.as_tmodule(), c, [["tau^2"]])
    cert = pd.reduce_e_vs_c(e, delta)
    assert cert.check
    assert cert.reduced.value == [["(1+T)*tau"]]
    assert (cert.input - cert.reduced) == pd.Biderivation.inner(cert.witness, e.as_tmodule(), c)
    assert pd.Biderivation.from_json(delta.to_json()) == delta

    inner = pd.Biderivation.inner([["T + tau"]], e.as_tmodule(), c)
    assert pd.find_splitting(inner) is not None
    assert pd.find_splitting(pd.Biderivation(e.as_tmodule(), c, [["tau"]]), 5) is None

    ext = pd.carlitz_ext(f2, 1, 2)
    assert ext.phi_t == [["T + tau", "1"], ["0", "T"]]
    c1, c2 = pd.carlitz_tensor(f2, 1), pd.carlitz_tensor(f2, 2)
    cert = pd.reduce_carlitz(1, 2, pd.Biderivation(c1, c2, [["0"], ["tau"]]))
    assert cert.reduced.value == [["1"], ["0"]]

    try:
        pd.carlitz_ext(f2, 2, 2)
    except pd.UnsupportedError:
        pass
    else:
        raise AssertionError("n <= m must be rejected")
    try:
        pd.DrinfeldModule(f2, ["T", "(1"])
    except pd.DrinfeldError:
        pass
    else:
        raise AssertionError("bad syntax must be rejected")

    f3 = pd.Field(3)
    e3 = pd.DrinfeldModule(f3, ["1", "1", "1"])
    d3 = pd.Biderivation(e3.dual()[1], pd.DrinfeldModule.carlitz(f3).as_tmodule(), [["tau^2", "T*tau^3"]])
    assert pd.reduce_dual_vs_c(e3, d3).check

    reports = [json.loads(r) for r in pd.verify(f3, "all", seed=5, trials=10)]
    assert len(reports) == 10 and all(r["passed"] for r in reports)

    print("pydrinfeld smoke test: ok")


if __name__ == "__main__":
    main()
