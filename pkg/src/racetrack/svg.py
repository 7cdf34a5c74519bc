"""SVG rendering of 2D lattice trajectories."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Optional, Sequence

from .errors import UnsupportedError
from .kinematics import Trajectory

CELL = 20
PAD = 1


def render(trajectory: Optional[Trajectory], cities: Sequence[Sequence[int]] = ()) -> str:
    """Grid, city markers and each configuration's velocity as an arrow into p. y grows upwards."""
    pts = [tuple(c) for c in cities]
    if trajectory is not None and len(trajectory):
        if trajectory.d != 2:
            raise UnsupportedError(f"can only draw d=2, got d={trajectory.d}")
        pts += trajectory.positions()
    if any(len(p) != 2 for p in pts):
        raise UnsupportedError("can only draw d=2 points")
    if not pts:
        pts = [(0, 0)]
    x0 = min(p[0] for p in pts) - PAD
    x1 = max(p[0] for p in pts) + PAD
    y0 = min(p[1] for p in pts) - PAD
    y1 = max(p[1] for p in pts) + PAD
    W, H = (x1 - x0) * CELL, (y1 - y0) * CELL

    def sx(x):
        return (x - x0) * CELL

    def sy(y):
        return (y1 - y) * CELL

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(W), height=str(H),
                     viewBox=f"0 0 {W} {H}")
    defs = ET.SubElement(svg, "defs")
    marker = ET.SubElement(defs, "marker", id="head", markerWidth="6", markerHeight="6", refX="5", refY="3",
                           orient="auto")
    ET.SubElement(marker, "path", d="M0,0 L6,3 L0,6 z", fill="#1f4e9c")
    grid = ET.SubElement(svg, "g", stroke="#ddd", **{"stroke-width": "1"})
    for x in range(x0, x1 + 1):
        ET.SubElement(grid, "line", x1=str(sx(x)), y1="0", x2=str(sx(x)), y2=str(H))
    for y in range(y0, y1 + 1):
        ET.SubElement(grid, "line", x1="0", y1=str(sy(y)), x2=str(W), y2=str(sy(y)))
    towns = ET.SubElement(svg, "g", fill="#c0392b", **{"class": "cities"})
    for x, y in (tuple(c) for c in cities):
        ET.SubElement(towns, "circle", cx=str(sx(x)), cy=str(sy(y)), r=str(CELL // 4))
    if trajectory is not None:
        moves = ET.SubElement(svg, "g", stroke="#1f4e9c", **{"stroke-width": "2", "class": "moves"})
        for c in trajectory.configs:
            (px, py), (vx, vy) = c.p, c.v
            if vx == 0 and vy == 0:
                continue
            ET.SubElement(moves, "line", x1=str(sx(px - vx)), y1=str(sy(py - vy)), x2=str(sx(px)),
                          y2=str(sy(py)), **{"marker-end": "url(#head)"})
    return ET.tostring(svg, encoding="unicode")


def count_arrows(svg_text: str) -> int:
    root = ET.fromstring(svg_text)
    ns = "{http://www.w3.org/2000/svg}"
    return sum(1 for g in root.iter(ns + "g") if g.get("class") == "moves" for _ in g.iter(ns + "line"))
