"""Named posets used throughout the package and its tests."""
from __future__ import annotations

from .errors import InvalidSize, UnknownName
from .topology import Poset


def circle4() -> Poset:
    return Poset(["x1", "x2", "x3", "x4"],
                 [("x1", "x3"), ("x1", "x4"), ("x2", "x3"), ("x2", "x4")])


def circle6() -> Poset:
    return Poset(["α", "β", "γ", "a", "b", "c"],
                 [("α", "a"), ("α", "c"), ("β", "a"), ("β", "b"), ("γ", "b"), ("γ", "c")])


def sphere6() -> Poset:
    links = [("x1", "x3"), ("x1", "x4"), ("x2", "x3"), ("x2", "x4"),
             ("x3", "x5"), ("x3", "x6"), ("x4", "x5"), ("x4", "x6")]
    return Poset([f"x{i}" for i in range(1, 7)], links)


def vee() -> Poset:
    # listed as {y_{i-1}, x_i, y_i} = {x2, x1, x3}; x1 is the open bottom point
    return Poset(["x2", "x1", "x3"], [("x1", "x2"), ("x1", "x3")])


def ypsilon() -> Poset:
    return Poset(["x1", "x2", "x3", "x4"], [("x1", "x2"), ("x2", "x3"), ("x2", "x4")])


def interval() -> Poset:
    return Poset(["x1", "x2"], [("x1", "x2")])


def point() -> Poset:
    return Poset(["x1"])


def line(window: int = 1) -> Poset:
    """Window of the line poset: open points x_{-W..W}, closed points y_{-W..W-1}.

    ``y_i`` sits above ``x_i`` and ``x_{i+1}``.
    """
    if window < 1:
        raise InvalidSize("line window must be at least 1")
    xs = [f"x{i}" for i in range(-window, window + 1)]
    ys = [f"y{i}" for i in range(-window, window)]
    links = []
    for i in range(-window, window):
        links += [(f"x{i}", f"y{i}"), (f"x{i + 1}", f"y{i}")]
    return Poset(xs + ys, links)


def circle2n(n: int) -> Poset:
    """2N-point circle: top points x1..xN, bottom x_{i+N} below x_i and x_{i+1}."""
    if n < 2:
        raise InvalidSize("the 2N-point circle needs N >= 2")
    links = []
    for i in range(1, n + 1):
        nxt = i % n + 1
        links += [(f"x{i + n}", f"x{i}"), (f"x{i + n}", f"x{nxt}")]
    return Poset([f"x{i}" for i in range(1, 2 * n + 1)], links)


_FIXED = {
    "circle4": circle4,
    "circle6": circle6,
    "sphere6": sphere6,
    "vee": vee,
    "Y": ypsilon,
    "interval": interval,
    "point": point,
}

NAMES = tuple(_FIXED) + ("line", "circle2n")


def standard_poset(name: str, *, window: int = 1, n: int = 2) -> Poset:
    if name in _FIXED:
        return _FIXED[name]()
    if name == "line":
        return line(window)
    if name == "circle2n":
        return circle2n(n)
    raise UnknownName(f"unknown catalog poset {name!r}; known: {', '.join(NAMES)}")


def catalog() -> dict[str, Poset]:
    """The fixed catalog plus a W=1 line window."""
    out = {k: f() for k, f in _FIXED.items()}
    out["line"] = line(1)
    out["circle2n"] = circle2n(4)
    return out
