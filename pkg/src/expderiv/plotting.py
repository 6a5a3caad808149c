"""Figure rendering for benchmark runs.

Kept separate from the harness so the timing loop never touches
matplotlib; uses the object-oriented Agg canvas directly, so no global
pyplot state is created or mutated.
"""

_METHOD_STYLE = {
    "recursive": dict(color="#1f77b4", marker="o", label="recursive accumulation"),
    "oracle": dict(color="#d62728", marker="s", label="brute-force symbolic"),
}


def save_timing_figure(records, destination, sweep_var=1, title=None):
    """Render wall time against the swept derivative order to an image file.

    One line per method; skipped measurements are simply absent.  The
    output format follows the file extension (png, pdf, svg, ...).
    """
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    records = list(records)
    if not records:
        raise ValueError("no records to plot")

    fig = Figure(figsize=(6.4, 4.2))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(1, 1, 1)

    span = set()
    for method, style in _METHOD_STYLE.items():
        xs, ys = [], []
        for record in records:
            if record.method == method and record.value is not None:
                xs.append(record.orders[sweep_var - 1])
                ys.append(record.seconds)
        if xs:
            ax.plot(xs, ys, linestyle="-", markersize=5, **style)
            span.update(ys)

    if span and max(span) / max(min(span), 1e-12) > 50:
        ax.set_yscale("log")
    ax.set_xlabel(f"derivative order of x{sweep_var}")
    ax.set_ylabel("wall time [s]")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(destination, dpi=150)
