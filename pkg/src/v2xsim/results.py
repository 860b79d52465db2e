"""Result serialization: CSV emission/parsing and the BLER-vs-SNR plot."""

from __future__ import annotations

import csv
import io

from .campaign import BlerCurve, BlerPoint, compute_bler

CSV_FIELDS = ("label", "snr_db", "blocks", "ctrl_err", "data_err",
              "ctrl_bler", "data_bler")


def format_results(curves: list[BlerCurve]) -> str:
    if not curves:
        raise ValueError("no curves to write")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for curve in curves:
        for p in curve.points:
            writer.writerow([
                curve.label,
                p.snr_db,
                p.blocks_tx,
                p.blocks_err_control,
                p.blocks_err_data,
                f"{compute_bler(p, 'control'):.6f}",
                f"{compute_bler(p, 'data'):.6f}",
            ])
    return buf.getvalue()


def write_results(curves: list[BlerCurve], path,
                  plot_path=None) -> None:
    text = format_results(curves)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    if plot_path is not None:
        plot_results(curves, plot_path)


def parse_results(path) -> list[BlerCurve]:
    """Inverse of write_results (the derived BLER columns are recomputed)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_FIELDS:
        raise ValueError(f"unrecognized results header in {path}")
    order: list[str] = []
    grouped: dict[str, list[BlerPoint]] = {}
    for row in rows[1:]:
        if len(row) != len(CSV_FIELDS):
            raise ValueError(f"malformed results row: {row!r}")
        label = row[0]
        point = BlerPoint(float(row[1]), int(row[2]), int(row[3]), int(row[4]))
        if label not in grouped:
            grouped[label] = []
            order.append(label)
        grouped[label].append(point)
    return [BlerCurve(label, tuple(grouped[label])) for label in order]


def plot_results(curves: list[BlerCurve], path) -> None:
    """Data BLER against SNR, log-scaled y; zero points are not drawable."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for curve in curves:
        xs = [p.snr_db for p in curve.points]
        ys = [compute_bler(p, "data") for p in curve.points]
        pairs = [(x, y) for x, y in zip(xs, ys) if y > 0]
        if not pairs:
            continue
        ax.semilogy(*zip(*pairs), marker="o", label=curve.label)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BLER")
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
