"""Matplotlib rendering of systems, observers, and the demo geometry.

Figures are written straight to files via an Agg-backed ``Figure`` so the
module works headless; no pyplot global state is touched.
"""

from __future__ import annotations

import math

from matplotlib.figure import Figure
from matplotlib.patches import Circle, FancyArrowPatch, Rectangle

from . import pwa
from .observer import ComponentObserver, Observer
from .system import TransitionSystem

_REGION_COLORS = {
    "A": "#e5885c", "B": "#7db8da", "C": "#8fca7c", "D": "#caa6dd",
}


def save_region_figure(path, dpi: int = 150) -> None:
    """Draw the eight explicit regions of the piecewise-linear demo.

    The unbounded complement E is the uncoloured background.
    """
    fig = Figure(figsize=(6.4, 6.4))
    ax = fig.add_subplot(1, 1, 1)
    for name in pwa.REGION_NAMES[:-1]:
        color = _REGION_COLORS[name[0]]
        alpha = 0.9 if name.endswith("1") else 0.45
        for b in pwa.REGIONS[name]:
            x0, x1 = float(b.x.lo), float(b.x.hi)
            y0, y1 = float(b.y.lo), float(b.y.hi)
            ax.add_patch(Rectangle(
                (x0, y0), x1 - x0, y1 - y0,
                facecolor=color, alpha=alpha, edgecolor="black", linewidth=0.6,
            ))
        anchor = pwa.REGIONS[name][0]
        cx = (float(anchor.x.lo) + float(anchor.x.hi)) / 2
        cy = (float(anchor.y.lo) + float(anchor.y.hi)) / 2
        ax.text(cx, cy, f"{name}/{pwa.REGION_OUTPUT[name]}",
                ha="center", va="center", fontsize=9)
    ax.text(2.0, 2.3, "E/5", ha="center", va="center", fontsize=9)
    ax.set_xlim(-2.6, 2.6)
    ax.set_ylim(-2.6, 2.6)
    ax.set_aspect("equal")
    ax.axhline(0, color="gray", linewidth=0.5)
    ax.axvline(0, color="gray", linewidth=0.5)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    fig.savefig(path, dpi=dpi, bbox_inches="tight")


def _circle_layout(n: int, radius: float = 1.0):
    return [
        (radius * math.cos(2 * math.pi * i / n - math.pi / 2),
         radius * math.sin(2 * math.pi * i / n - math.pi / 2))
        for i in range(n)
    ]


def _draw_graph(nodes, edges, initial, secret, offenders, path, dpi):
    """Shared circular-layout digraph renderer.

    ``nodes`` maps node id -> label; ``edges`` is a list of
    (src id, label, dst id).
    """
    n = max(len(nodes), 1)
    pos = dict(zip(nodes, _circle_layout(n, radius=max(1.0, 0.28 * n))))
    size = max(4.8, 1.6 * math.sqrt(n) + 3)
    fig = Figure(figsize=(size, size))
    ax = fig.add_subplot(1, 1, 1)

    node_r = 0.22
    grouped: dict[tuple, list[str]] = {}
    for src, label, dst in edges:
        grouped.setdefault((src, dst), []).append(label)

    for (src, dst), labels in sorted(
        grouped.items(), key=lambda kv: (nodes[kv[0][0]], nodes[kv[0][1]])
    ):
        label = ",".join(sorted(set(labels)))
        x1, y1 = pos[src]
        x2, y2 = pos[dst]
        if src == dst:
            loop = Circle((x1, y1 + node_r * 1.4), node_r * 0.8,
                          fill=False, color="black", linewidth=0.8)
            ax.add_patch(loop)
            ax.text(x1, y1 + node_r * 2.6, label, ha="center", fontsize=8)
        else:
            arrow = FancyArrowPatch(
                (x1, y1), (x2, y2), connectionstyle="arc3,rad=0.12",
                arrowstyle="-|>", mutation_scale=12, color="black",
                shrinkA=18, shrinkB=18, linewidth=0.8,
            )
            ax.add_patch(arrow)
            mx, my = (x1 + x2) / 2, (y1 + y2) / 2
            ax.text(mx + 0.08, my + 0.08, label, fontsize=8)

    for node, label in nodes.items():
        x, y = pos[node]
        fill = "lightcoral" if node in offenders else "white"
        ax.add_patch(Circle((x, y), node_r, facecolor=fill, edgecolor="black"))
        if node in secret:
            ax.add_patch(Circle((x, y), node_r * 0.82, fill=False, edgecolor="black"))
        if node in initial:
            ax.annotate(
                "", xy=(x - node_r, y), xytext=(x - node_r * 2.2, y),
                arrowprops=dict(arrowstyle="-|>", color="black"),
            )
        ax.text(x, y, label, ha="center", va="center", fontsize=7)

    ax.relim()
    ax.autoscale_view()
    ax.margins(0.15)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=dpi, bbox_inches="tight")


def save_system_figure(
    sys: TransitionSystem, path, offenders=(), dpi: int = 150
) -> None:
    """Render a transition system: double circle = secret, arrow = initial."""
    nodes = {s: f"{s}/{sys.output_map[s]}" for s in sys.states}
    edges = [(src, u, dst) for (src, u, dst) in sorted(sys.transitions)]
    _draw_graph(nodes, edges, set(sys.initial), set(sys.secret),
                set(offenders), path, dpi)


def save_observer_figure(
    obs: Observer | ComponentObserver, path, offenders=(), dpi: int = 150
) -> None:
    """Render an observer graph; ``offenders`` are filled."""
    if isinstance(obs, Observer):
        nodes = {state: state.label() for state in obs.states}
        edges = [
            (src, f"({u1 or 'ε'},{u2 or 'ε'})", dst)
            for (src, (u1, u2), dst) in obs.transitions
        ]
    else:
        nodes = {q: "{" + ",".join(sorted(q)) + "}" for q in obs.states}
        edges = list(obs.transitions)
    _draw_graph(nodes, edges, set(obs.initial), set(), set(offenders), path, dpi)
