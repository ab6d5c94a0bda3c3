"""Smoke test for the diffnorm extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
Then run:                 python python/smoke_test.py
"""

import math
import os
import tempfile

import diffnorm as dn


def close(a, b, tol):
    assert abs(a - b) <= tol * max(1.0, abs(b)), (a, b)


def main():
    g = dn.Grid(1, 512, 32.0)
    assert len(g) == 512 and g.d == 1
    close(g.nyquist, math.pi * 512 / 32.0, 1e-15)

    f = dn.Function.sample(g, "gauss:1")
    # the L^2 norm of exp(-x^2) is (pi/2)^(1/4)
    close(dn.lp_norm(f, 2.0), (math.pi / 2) ** 0.25, 1e-12)
    assert dn.bessel_norm(f, 0.0, 3.0, "power:0.5") == dn.lp_norm(f, 3.0, "power:0.5")

    # J_s J_{-s} is the identity
    back = dn.bessel_potential(dn.bessel_potential(f, 0.7), -0.7)
    assert max(abs(a - b) for a, b in zip(back.values(), f.values())) < 1e-12

    # values round trip through a Python list and a CSV file
    h = dn.Function.from_values(g, [complex(v) for v in f.values()])
    assert h.values() == f.values()
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "f.csv")
        f.write_csv(path)
        assert dn.Function.read_csv(path).values() == f.values()

    b = dn.bessel_norm(f, 0.5, 2.0)
    d = dn.difference_norm(f, 0.5, 2.0, m=1, j_max=8)
    ratio = d["value"] / b
    assert 0.1 < ratio < 10.0, ratio
    t = dn.triebel_norm(f, 0.5, 2.0, 2.0)
    assert 0.25 < t / b < 4.0
    r = dn.randomized_lp_norm(f, 0.5, 3.0, trials=256)
    assert r["value"] > 0 and len(r["curve"]) > 0
    assert dn.strichartz_norm(f, 0.5, 2.0) > 0

    # A_p characteristic of constants, and a weight outside A_2
    assert dn.ap_characteristic("const:3", 2.0) == 1.0
    try:
        dn.ap_characteristic("power:1.2", 2.0)
        raise AssertionError("power:1.2 is not an A_2 weight")
    except dn.DiffnormError as e:
        assert "non_integrable_weight" in str(e)

    inc = dn.inclusion_condition("const:1", 0.25, 2.0)
    assert inc["verdict"] == "bounded"

    cond = dn.conditions("sinc", gamma=0.9, delta0=1.0, delta_inf=0.05)
    assert math.isfinite(cond["C_0"]) and math.isfinite(cond["C_inf"])
    cond = dn.conditions("const:1")
    assert not math.isfinite(cond["C_inf"])

    pts = dn.threshold_grid([0.0], [0.0], [2.0])
    assert all(0 < s < 1 for (_, _, _, s) in pts)

    lo = dn.multiplier_sweep(0.2, 2.0, n0=256, levels=5)
    hi = dn.multiplier_sweep(0.6, 2.0, n0=256, levels=5)
    assert lo["verdict"] == "bounded" and hi["verdict"] == "diverging"
    assert lo["agreement"] and hi["agreement"]

    try:
        dn.lp_norm(f, 1.0)
        raise AssertionError("p = 1 must be rejected")
    except dn.DiffnormError:
        pass

    print("smoke test passed")


if __name__ == "__main__":
    main()
