"""Regression summary and plot scripts built from a results CSV (no recomputation)."""

import json
import math
import os
from collections import defaultdict

from .experiments import cell_means, fit_linear, fit_linlog, fit_loglog, pearson, read_rows, spearman
from .walker import estimate_log_plo


def _enumerated(cells):
    return [c for c in cells if c.n_plo is not None and c.n_pareto is not None and c.mean_walk is not None]


def regression_summary(rows):
    """Fits behind the scatter plots, per enumerated bit-string length.

    Returns a dict keyed by ``n`` holding the Pareto-size vs PLO log-log fit,
    the PLO vs walk-length lin-log fit (absolute counts and fractions of the
    space) and the share of cells whose refitted estimate is within a factor 2.
    """
    cells = cell_means(rows)
    by_n = defaultdict(list)
    for c in _enumerated(cells.values()):
        by_n[c.n].append(c)
    out = {}
    for n, cs in sorted(by_n.items()):
        if len(cs) < 3:
            continue
        plo = [c.n_plo for c in cs]
        pareto = [c.n_pareto for c in cs]
        walk = [c.mean_walk for c in cs]
        space = 2.0**n
        ll = fit_loglog(plo, pareto)
        lin = fit_linlog(walk, plo)
        lin_frac = fit_linlog(walk, [p / space for p in plo])
        within = sum(abs(estimate_log_plo(w, lin) - math.log(p)) <= math.log(2.0) for w, p in zip(walk, plo))
        out[n] = {
            "cells": len(cs),
            "pareto_vs_plo": ll,
            "pareto_vs_plo_fraction": fit_loglog([p / space for p in plo], [q / space for q in pareto]),
            "pareto_vs_plo_spearman": spearman(plo, pareto),
            "plo_vs_walk": lin,
            "plo_fraction_vs_walk": lin_frac,
            "walk_vs_log_plo_pearson": pearson(walk, [math.log(p) for p in plo]),
            "estimate_within_factor_2": within / len(cs),
        }
    return out


def walk_slopes(rows):
    """Linear fit of mean walk length against ``n`` for each ``(k, m, rho)`` series."""
    series = defaultdict(list)
    for c in cell_means(rows).values():
        if c.mean_walk is not None:
            series[(c.k, c.m, c.rho)].append((c.n, c.mean_walk))
    out = {}
    for key, pts in sorted(series.items()):
        pts.sort()
        if len({n for n, _ in pts}) >= 3:
            out[key] = fit_linear([n for n, _ in pts], [w for _, w in pts])
    return out


def format_summary(rows):
    lines = [f"instances: {len(rows)}", f"cells: {len(cell_means(rows))}"]
    for n, s in regression_summary(rows).items():
        ll, lin, frac = s["pareto_vs_plo"], s["plo_vs_walk"], s["plo_fraction_vs_walk"]
        lines += [
            f"",
            f"[N={n}] {s['cells']} enumerated cells",
            f"  ln(pareto) = {ll.a:.4f} ln(plo) + {ll.b:.4f}   pearson(log) r={ll.r:.4f}  spearman={s['pareto_vs_plo_spearman']:.4f}",
            f"  ln(plo) = {lin.a:.4f} walk + {lin.b:.4f}   r={lin.r:.4f}",
            f"  ln(plo/2^N) = {frac.a:.4f} walk + {frac.b:.4f}   r={frac.r:.4f}",
            f"  intercept vs ln(2^N)={n * math.log(2):.4f}: absolute-count fit off by {abs(lin.b - n * math.log(2)):.4f},"
            f" fraction fit off by {abs(frac.b):.4f}",
            f"  refitted estimate within factor 2 on {100 * s['estimate_within_factor_2']:.1f}% of cells",
        ]
    slopes = walk_slopes(rows)
    if slopes:
        lines += ["", "walk length vs N (linear fits)", "  K  M  rho    slope     intercept  R^2"]
        for (k, m, rho), f in slopes.items():
            lines.append(f"  {k:<2} {m:<2} {rho:+.2f}  {f.a:.5f}  {f.b:+.4f}    {f.r_squared:.4f}")
    return "\n".join(lines) + "\n"


_SCRIPT = '''"""{title} (generated from {source})."""
import json

import matplotlib.pyplot as plt

PANELS = json.loads(r"""{panels}""")

fig, axes = plt.subplots(1, len(PANELS), figsize=(5 * len(PANELS), 4), squeeze=False)
for ax, panel in zip(axes[0], PANELS):
    for s in panel["series"]:
        if panel.get("scatter"):
            ax.scatter(s["x"], s["y"], s=12, label=s["label"])
        else:
            ax.plot(s["x"], s["y"], marker="o", label=s["label"])
    for line in panel.get("lines", []):
        ax.plot(line["x"], line["y"], "k--", label=line["label"])
    if panel.get("logx"):
        ax.set_xscale("log")
    if panel.get("logy"):
        ax.set_yscale("log")
    ax.set_title(panel["title"])
    ax.set_xlabel(panel["xlabel"])
    ax.set_ylabel(panel["ylabel"])
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig("{stem}.png", dpi=150)
'''


def _series(cells, fixed, vary, group, value):
    groups = defaultdict(list)
    for c in cells:
        if all(getattr(c, a) == v for a, v in fixed.items()) and getattr(c, value) is not None:
            groups[getattr(c, group)].append((getattr(c, vary), getattr(c, value)))
    return [
        {"label": f"{group.upper()}={g}", "x": [p[0] for p in sorted(pts)], "y": [p[1] for p in sorted(pts)]}
        for g, pts in sorted(groups.items())
    ]


def _small_n(cells):
    ns = sorted({c.n for c in cells if c.n_plo is not None})
    return ns[0] if ns else min(c.n for c in cells)


def plot_panels(rows):
    """Figure name -> list of panel dicts (the data the plot scripts embed)."""
    cells = list(cell_means(rows).values())
    if not cells:
        return {}
    n0 = _small_n(cells)
    figs = {}
    for name, value, label in (("fig1_plo", "plo_fraction", "PLO / 2^N"), ("fig3_walk", "mean_walk", "mean walk length")):
        logy = value == "plo_fraction"
        figs[name] = [
            {"title": f"N={n0}, M={m}", "xlabel": "rho", "ylabel": label, "logy": logy,
             "series": _series(cells, {"n": n0, "m": m}, "rho", "k", value)}
            for m in (2, 5)
        ] + [
            {"title": f"N={n0}, rho={rho}", "xlabel": "K", "ylabel": label, "logy": logy,
             "series": _series(cells, {"n": n0, "rho": rho}, "k", "m", value)}
            for rho in (-0.2, 0.9)
        ]
    enum = [c for c in _enumerated(cells) if c.n == n0]
    if len(enum) >= 3:
        space = 2.0**n0
        ll = fit_loglog([c.n_plo for c in enum], [c.n_pareto for c in enum])
        xs = sorted(c.n_plo / space for c in enum)
        figs["fig2_pareto_vs_plo"] = [{
            "title": f"N={n0}, r={ll.r:.3f}", "xlabel": "PLO / 2^N", "ylabel": "Pareto set / 2^N",
            "logx": True, "logy": True, "scatter": True,
            "series": [{"label": "cells", "x": [c.n_plo / space for c in enum], "y": [c.n_pareto / space for c in enum]}],
            "lines": [{"label": f"a={ll.a:.3f} b={ll.b:.3f}", "x": [xs[0], xs[-1]],
                       "y": [math.exp(ll.a * math.log(x * space) + ll.b) / space for x in (xs[0], xs[-1])]}],
        }]
        lin = fit_linlog([c.mean_walk for c in enum], [c.n_plo for c in enum])
        ws = sorted(c.mean_walk for c in enum)
        figs["fig4_plo_vs_walk"] = [{
            "title": f"N={n0}, r={lin.r:.3f}", "xlabel": "mean walk length", "ylabel": "PLO / 2^N",
            "logy": True, "scatter": True,
            "series": [{"label": "cells", "x": [c.mean_walk for c in enum], "y": [c.n_plo / space for c in enum]}],
            "lines": [{"label": f"a={lin.a:.3f} b={lin.b:.3f}", "x": [ws[0], ws[-1]],
                       "y": [math.exp(lin.a * w + lin.b) / space for w in (ws[0], ws[-1])]}],
        }]
    if len({c.n for c in cells}) >= 2:
        figs["fig5_large_n"] = [
            {"title": "K=4, rho=-0.2", "xlabel": "N", "ylabel": "mean walk length",
             "series": _series(cells, {"k": 4, "rho": -0.2}, "n", "m", "mean_walk")},
            {"title": "K=4, M=2", "xlabel": "N", "ylabel": "mean walk length",
             "series": _series(cells, {"k": 4, "m": 2}, "n", "rho", "mean_walk")},
        ] + [
            {"title": f"K=4, N={n}", "xlabel": "rho", "ylabel": "mean walk length",
             "series": _series(cells, {"k": 4, "n": n}, "rho", "m", "mean_walk")}
            for n in (64, 128)
        ]
    return figs


def write_report(csv_path, out_dir):
    """Write ``summary.txt`` and one matplotlib script per figure; return the paths."""
    rows = read_rows(csv_path)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    path = os.path.join(out_dir, "summary.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_summary(rows))
    written.append(path)
    for stem, panels in plot_panels(rows).items():
        path = os.path.join(out_dir, stem + ".py")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_SCRIPT.format(
                title=stem, source=os.path.basename(str(csv_path)), stem=stem,
                panels=json.dumps(panels, indent=1),
            ))
        written.append(path)
    return written
