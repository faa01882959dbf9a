"""Smoke test for the exforge Python module.

Build and install first:  pip install -e crates/py --no-build-isolation
"""

import os
import sys
import tempfile

import exforge


def main() -> int:
    g = exforge.construct("Os", "Js1")
    assert g.dim == 52, g
    assert g.mu == ("1/3", "1", "-2"), g.mu
    assert g.summand_tags.count("DerO") == 14

    lie = g.lie
    assert lie.signature() == (28, 24, 0)
    assert lie.delta == 4
    assert lie.verify("full")["passed"]
    assert lie.simplicity()["passed"]
    assert g.dual_pair()["passed"]
    assert g.cartan_involution()["passed"]

    ident = lie.identify(seed=3)
    assert ident["label"] == "f4s", ident
    assert ident["root_count"] == 48
    assert ident["dynkin_type"] == "F4"

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "f4.lie")
        checksum = g.save(path)
        assert os.path.exists(os.path.join(d, "f4.meta.json"))
        back = exforge.LieAlgebra.load(path)
        assert back == lie
        assert back.checksum() == checksum
        assert back.to_json() == lie.to_json()

    try:
        exforge.LieAlgebra.from_json(lie.to_json().replace('"2"]', '"2/4"]', 1))
    except ValueError as e:
        assert "line" in str(e), e
    else:
        raise AssertionError("non-reduced rational accepted")

    try:
        exforge.construct("-1,0,1", "Jc1")
    except ValueError:
        pass
    else:
        raise AssertionError("zero doubling parameter accepted")

    assert exforge.real_form_label(248, 128, 120) == "e8s"
    rows = exforge.table1()
    assert [r["dim"] for r in rows] == [3, 8, 21, 52]
    cells = exforge.table2(jacobi_samples=1000, seed=5)
    assert [c["label"] for c in cells[11:]] == [
        "f4s", "f4s", "e6,4", "e6,4", "e6s", "e7,4", "e7,4", "e7s", "e8,4", "e8,4", "e8s",
    ]
    assert all(c["checks"] for c in cells)
    names = {e["name"] for e in exforge.catalog_entries()}
    assert {"Oc", "Os", "Jc8", "JII2"} <= names

    print("python smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
