"""Smoke test for the polya_pila extension module.

Build and install first:
    pip install maturin
    maturin develop -m crates/python/Cargo.toml
or copy target/release/libpolya_pila.so to polya_pila.so on PYTHONPATH.
"""

import polya_pila as pp


def main():
    assert pp.mu(2) == 6

    circle = pp.Curve("x^2 + y^2 - 1")
    assert circle.degree == 2
    pts = circle.rational_points(5)
    assert len(pts) == 12, pts
    assert ("3/5", "4/5") in pts

    ws = pp.Curve("y - x^2").wronskians(1)
    assert ws == ["1", "1", "2"], ws

    cubic = pp.Curve("x^3 + y^3 - 1")
    report = cubic.count(10)
    assert report["counts"]["box_total"] == len(cubic.rational_points(10))

    arcs = cubic.arcs(2, 6)
    assert arcs["component_count"] >= 1

    line = pp.fit([("0", "0"), ("1/2", "1/2"), ("1", "1")], 1)
    assert line is not None
    assert pp.fit([("0", "0"), ("1", "0"), ("0", "1")], 1) is None

    try:
        pp.Curve("(x - y)^2")
    except ValueError:
        pass
    else:
        raise AssertionError("non-square-free curve accepted")

    print("python smoke test ok")


if __name__ == "__main__":
    main()
