"""Smoke test for the hocolim extension module.

Build it first with `pip install --no-build-isolation -e crates/python`.
"""

from pathlib import Path

import hocolim

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    S = hocolim.SimplicialSet
    assert S.sphere(2).homology() == [1, 0, 1]
    assert S.boundary(3).homology(p=3) == [1, 0, 1]
    assert S.standard(2).cone().homology() == [1]
    assert S.standard(1).product(S.standard(1)).counts() == [4, 5, 2]
    assert S.sphere(1).verify_cone()["verdict"]

    span = hocolim.Category.span()
    assert span.num_objects() == 3 and span.is_loop_free()
    assert span.nerve().counts() == [3, 2]
    square = hocolim.Category.ordinal(1).product(hocolim.Category.ordinal(1))
    assert square.nerve().is_isomorphic(S.standard(1).product(S.standard(1)))

    circle = hocolim.ChainComplex([1, 1], [[0]])
    assert circle.betti() == [1, 1]

    pushout = hocolim.Workspace.load(DATA / "pushout" / "F.json")
    assert pushout.hocolim("F") == [1, 0, 1]

    cube = hocolim.Workspace.load(DATA / "cube" / "H.json")
    assert cube.grothendieck("H").num_objects() == 7
    assert cube.verify_thomason("H")["verdict"]

    w = hocolim.gen("simplicial-map", seed=3)
    assert w.verify_kan_bounded()["verdict"]
    kan = w.kan()
    assert len(kan.names()["diagrams"]) == 1
    assert hocolim.gen("poset", seed=3).to_json() == hocolim.gen("poset", seed=3).to_json()

    print("smoke test passed")


if __name__ == "__main__":
    main()
