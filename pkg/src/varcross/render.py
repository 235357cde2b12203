"""Hasse-diagram rendering for manifest layouts.

Manifests may carry ``node NAME X Y`` and ``edge A B`` lines describing
the subvariety diagram their claims certify; this draws that diagram and
stamps the claim tallies on it, so a report directory gets a figure next
to each record file.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_manifest(manifest, report, path):
    if not manifest.nodes:
        return False
    fig, ax = plt.subplots(figsize=(5.0, 6.0))
    for a, b in manifest.edges:
        (xa, ya), (xb, yb) = manifest.nodes[a], manifest.nodes[b]
        ax.plot([xa, xb], [ya, yb], color="0.45", lw=1.2, zorder=1)
    for label, (x, y) in manifest.nodes.items():
        ax.scatter([x], [y], s=36, color="black", zorder=2)
        ax.annotate(label, (x, y), xytext=(6, 2), textcoords="offset points",
                    fontsize=9)
    totals = report.counts()
    bad = totals["fail"] + totals["error"]
    status = "all claims pass" if bad == 0 else f"{bad} claims failing"
    color = "darkgreen" if bad == 0 else "darkred"
    if totals["inconclusive"]:
        status += f" ({totals['inconclusive']} inconclusive)"
    ax.set_title(f"{manifest.name}: {status}", fontsize=10, color=color)
    ax.set_axis_off()
    ax.margins(0.15)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return True
