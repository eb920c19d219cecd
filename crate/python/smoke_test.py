#!/usr/bin/env python3
"""Smoke test for the shadow_py bindings.

Run after `pip install -e . --no-build-isolation` from the repository
root: `python python/smoke_test.py`.
"""

import json

import shadow_py


def main():
    # sphere with gleam +1: the complex projective plane
    s = shadow_py.Shadow.from_text("vertex a D\nvertex b D\nedge a b g=1\n")
    s.validate()
    assert s.euler() == 2
    assert s.boundary_h1() == "0"
    assert s.candidate_rank() == 0
    d = json.loads(s.normalize_json())
    assert (d["chi"], d["sigma"], d["cp2_plus"]) == (3, 1, 1)

    # double of the gleam-0 sphere: chi 4, sigma 0, simply connected
    s0 = shadow_py.Shadow.from_text("vertex a D\nvertex b D\nedge a b g=0\n")
    dd = json.loads(s0.double().normalize_json())
    assert (dd["chi"], dd["sigma"], dd["h1"], dd["form_type"]) == (4, 0, "0", "1H")

    # text round-trip
    assert shadow_py.Shadow.from_text(s0.to_text()).to_text() == s0.to_text()
    assert s0.to_dot().startswith("graph shadow {")

    # plumbing determinant: chain 2,2,2 has determinant 4
    assert shadow_py.plumb_det([2, 2, 2]) == "4"
    assert shadow_py.plumb_witness([1]) is not None

    # homology of the polyhedron underlying a projective plane
    rp2 = shadow_py.Shadow.from_text(
        "vertex m Y2\nvertex c D\nedge m c g=1\n"
    )
    assert rp2.homology(1, "z") == "Z/2"
    assert rp2.homology(1, "z2") == "Z/2"

    # dihedral classification table for order 4
    labels = shadow_py.classify_sp("D:4")
    assert [l[0] for l in labels] == ["D2^0", "D2^1", "D2^2", "D2^3"]
    assert [l[3] for l in labels] == [3, 2, 1, 0]

    # finite-group classifications
    assert rp2.classify_ac() == "C(2) + 0 S^2"
    chain = shadow_py.Shadow.from_text(
        "vertex y Y12\nvertex c D\nvertex d D\n"
        "edge c y.unmarked g=1/2\nedge y.marked d g=0\n"
    )
    assert chain.classify_ac() == "C(1) + 1 S^2"

    # fuzzed graphs parse back and validate
    text, key = shadow_py.fuzz(11, 15)
    g = shadow_py.Shadow.from_text(text)
    g.validate()
    assert key.startswith("blocks=")

    print("smoke test: ok")


if __name__ == "__main__":
    main()
