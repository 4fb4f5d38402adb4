"""Command line interface; thin wrappers over the library and service.

Exit codes: 0 success, 2 usage error (click), 1 runtime error.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .bundle import ModelBundle
from .corpus import CORPUS_FORMATS, load_corpus, save_jsonl
from .errors import CoherenceError
from .evaluation import format_report_table, run_benchmark
from .modeldir import read_model_dir, write_model_dir
from .pipeline import train_from_corpus
from .position_model import TrainConfig
from .synthetic import generate_synthetic_corpus, synthetic_vector_store
from .workbench import AnalysisOptions, analysis_payload, analyze_document
from .embeddings import save_vectors


def _parse_ints(value: str) -> tuple[int, ...]:
    return tuple(int(part) for part in value.split(",") if part)


def _parse_floats(value: str) -> tuple[float, ...]:
    return tuple(float(part) for part in value.split(",") if part)


def _load_bundle(model_dir: str, vectors: str | None) -> ModelBundle:
    store = None
    if vectors:
        from .embeddings import load_vectors

        store = load_vectors(vectors)
    return read_model_dir(model_dir, store=store)


@click.group()
def cli() -> None:
    """Sentence-position coherence workbench."""


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--format", "corpus_format", default="jsonl", type=click.Choice(CORPUS_FORMATS))
@click.option("--vectors", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--q", default=10, show_default=True)
@click.option("--widths", default="256,256", show_default=True, help="per-direction layer widths")
@click.option("--dropouts", default="0.0,0.0", show_default=True)
@click.option("--l-max", default=25, show_default=True)
@click.option("--vocab-size", default=1000, show_default=True)
@click.option("--epochs", default=10, show_default=True)
@click.option("--batch-size", default=32, show_default=True)
@click.option("--lr", default=0.002, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--shuffle-seed", default=0, show_default=True)
@click.option("--val-fraction", default=0.1, show_default=True)
@click.option("--tag", default="", help="free-form corpus tag stored with the model")
def train(
    corpus_path,
    corpus_format,
    vectors,
    out_dir,
    q,
    widths,
    dropouts,
    l_max,
    vocab_size,
    epochs,
    batch_size,
    lr,
    seed,
    shuffle_seed,
    val_fraction,
    tag,
):
    """Train a position model and write a model directory."""
    layer_widths = _parse_ints(widths)
    layer_dropouts = _parse_floats(dropouts)
    if len(layer_dropouts) != len(layer_widths):
        raise click.UsageError("--widths and --dropouts must have the same length")

    def on_epoch(epoch, stats):
        parts = [f"epoch {epoch + 1}/{epochs}", f"loss {stats.train_loss:.4f}",
                 f"acc {stats.train_accuracy:.3f}"]
        if stats.val_loss is not None:
            parts.append(f"val_loss {stats.val_loss:.4f}")
            parts.append(f"val_acc {stats.val_accuracy:.3f}")
        click.echo("  ".join(parts), err=True)

    artifacts = train_from_corpus(
        corpus_path,
        corpus_format,
        vectors,
        q=q,
        layer_widths=layer_widths,
        layer_dropouts=layer_dropouts,
        l_max=l_max,
        seed=seed,
        vocab_size=vocab_size,
        val_fraction=val_fraction,
        tc=TrainConfig(
            epochs=epochs,
            batch_size=batch_size,
            learning_rate=lr,
            shuffle_seed=shuffle_seed,
        ),
        on_epoch=on_epoch,
    )
    write_model_dir(
        out_dir,
        artifacts.bundle.model,
        artifacts.bundle.vocab,
        vectors,
        corpus_tag=tag,
        vector_dim=artifacts.bundle.store.dim,
    )
    click.echo(f"model written to {out_dir}")


@cli.command()
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--vectors", type=click.Path(exists=True), help="override the recorded vector file")
@click.option("--in", "input_path", type=click.Path(exists=True))
@click.option("--text", help="analyze this text instead of a corpus file")
@click.option("--format", "corpus_format", default="jsonl", type=click.Choice(CORPUS_FORMATS))
@click.option("--n-summary", default=3, show_default=True)
@click.option("--jsd-threshold", default=0.2, show_default=True)
@click.option("--drop-delta", default=None, type=float, help="subsection reset size; default q/3")
@click.option("--plot", "plot_path", type=click.Path(), help="write a heatmap image here")
def analyze(
    model_dir, vectors, input_path, text, corpus_format, n_summary, jsd_threshold, drop_delta, plot_path
):
    """Emit heatmap JSON (one line per document) or a rendered plot."""
    bundle = _load_bundle(model_dir, vectors)
    options = AnalysisOptions(n_summary=n_summary, jsd_threshold=jsd_threshold, drop_delta=drop_delta)
    docs = _input_documents(input_path, text, corpus_format)
    for doc in docs:
        result = analyze_document(bundle, doc, options)
        payload = analysis_payload(result)
        payload["id"] = doc.id
        if plot_path:
            _render_heatmap_plot(payload, plot_path)
            click.echo(f"plot written to {plot_path}", err=True)
        else:
            click.echo(json.dumps(payload, ensure_ascii=False))


@cli.command()
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--vectors", type=click.Path(exists=True))
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--format", "corpus_format", default="jsonl", type=click.Choice(CORPUS_FORMATS))
def reorder(model_dir, vectors, input_path, corpus_format):
    """Induced sentence order per document, as JSON lines."""
    bundle = _load_bundle(model_dir, vectors)
    for doc in _input_documents(input_path, None, corpus_format):
        result = analyze_document(bundle, doc)
        click.echo(
            json.dumps(
                {
                    "id": doc.id,
                    "permutation": list(result.ordering.permutation),
                    "weighted_quantiles": list(result.ordering.weighted_quantiles),
                }
            )
        )


@cli.command()
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--vectors", type=click.Path(exists=True))
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--format", "corpus_format", default="jsonl", type=click.Choice(CORPUS_FORMATS))
@click.option("--n", default=3, show_default=True)
def summarize(model_dir, vectors, input_path, corpus_format, n):
    """First-quantile extractive summary per document."""
    bundle = _load_bundle(model_dir, vectors)
    for doc in _input_documents(input_path, None, corpus_format):
        result = analyze_document(bundle, doc, AnalysisOptions(n_summary=n))
        click.echo(
            json.dumps(
                {
                    "id": doc.id,
                    "summary": list(result.summary.selected),
                    "scores": list(result.summary.scores),
                    "sentences": [doc.sentences[i].text for i in result.summary.selected],
                },
                ensure_ascii=False,
            )
        )


@cli.command()
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--vectors", type=click.Path(exists=True))
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--format", "corpus_format", default="jsonl", type=click.Choice(CORPUS_FORMATS))
@click.option("--k", default=20, show_default=True, help="permutations per document")
@click.option("--seed", default=0, show_default=True)
def discriminate(model_dir, vectors, input_path, corpus_format, k, seed):
    """Original-vs-permuted discrimination accuracy over a corpus."""
    bundle = _load_bundle(model_dir, vectors)
    docs = _input_documents(input_path, None, corpus_format)
    report = run_benchmark("discrimination", bundle, docs, k=k, seed=seed)
    click.echo(json.dumps(report))


@cli.command(name="eval")
@click.option("--task", required=True, type=click.Choice(["discrimination", "reordering", "summarization"]))
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--vectors", type=click.Path(exists=True))
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--format", "corpus_format", default="jsonl", type=click.Choice(CORPUS_FORMATS))
@click.option("--k", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--folds", default=None, type=int, help="cross-validation folds for discrimination")
@click.option("--n", "summary_n", default=3, show_default=True, help="summary size")
@click.option("--json", "json_out", type=click.Path(), help="also write the JSON report here")
def eval_command(task, model_dir, vectors, input_path, corpus_format, k, seed, folds, summary_n, json_out):
    """Run a benchmark task and print a report table plus JSON."""
    bundle = _load_bundle(model_dir, vectors)
    docs = _input_documents(input_path, None, corpus_format)
    report = run_benchmark(task, bundle, docs, k=k, seed=seed, folds=folds, summary_n=summary_n)
    click.echo(format_report_table(report), err=True)
    text = json.dumps(report)
    click.echo(text)
    if json_out:
        Path(json_out).write_text(text + "\n", encoding="utf-8")


@cli.command()
@click.option("--data-dir", default=None, type=click.Path(), help="defaults to $COHERE_DATA_DIR")
@click.option("--port", default=None, type=int, help="defaults to $COHERE_PORT or 8000")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--webapp", "webapp_dir", default=None, type=click.Path(), help="static webapp bundle")
def serve(data_dir, port, host, webapp_dir):
    """Run the HTTP analysis service."""
    import uvicorn

    from .service import create_app

    port = port if port is not None else int(os.environ.get("COHERE_PORT", "8000"))
    app = create_app(data_dir=data_dir, webapp_dir=webapp_dir)
    uvicorn.run(app, host=host, port=port)


@cli.command()
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True))
@click.option("--data-dir", required=True, type=click.Path())
@click.option("--tag", default="")
@click.option("--id", "model_id", default=None, help="registry id; random when omitted")
def register(model_dir, data_dir, tag, model_id):
    """Copy a trained model directory into a service data directory."""
    import json as _json

    from .service import ModelRegistry

    bundle = read_model_dir(model_dir)
    meta = _json.loads((Path(model_dir) / "meta.json").read_text(encoding="utf-8"))
    registry = ModelRegistry(data_dir)
    entry = registry.register(
        bundle.model,
        bundle.vocab,
        meta.get("vectors_path", ""),
        corpus_tag=tag or meta.get("corpus_tag", ""),
        model_id=model_id,
        vector_dim=bundle.store.dim,
    )
    click.echo(entry.model_id)


@cli.command()
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--n-docs", default=200, show_default=True)
@click.option("--n-sentences", default=10, show_default=True)
@click.option("--dim", default=12, show_default=True)
@click.option("--seed", default=0, show_default=True)
def synth(out_dir, n_docs, n_sentences, dim, seed):
    """Write a synthetic corpus plus matching vectors for demos and tests."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    docs = generate_synthetic_corpus(n_docs, n_sentences=n_sentences, seed=seed)
    store = synthetic_vector_store(dim=dim, seed=seed + 7)
    save_jsonl(docs, out / "corpus.jsonl")
    save_vectors(store, out / "vectors.txt")
    click.echo(f"wrote {len(docs)} documents to {out / 'corpus.jsonl'}")


def _input_documents(input_path, text, corpus_format):
    if text is not None:
        from .corpus import segment_sentences, Document

        sentences = segment_sentences(text)
        return [Document(id="text", sentences=tuple(sentences), source_meta={})]
    if input_path is None:
        raise click.UsageError("provide --in or --text")
    result = load_corpus(input_path, corpus_format)
    for record in result.skipped:
        click.echo(f"skipped {record.location}: {record.reason}", err=True)
    return list(result.documents)


def _render_heatmap_plot(payload: dict, plot_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    rows = np.array(payload["ppd"])
    n, q = rows.shape
    fig, ax = plt.subplots(figsize=(max(4.0, q * 0.5), max(2.5, n * 0.4)))
    ax.imshow(rows, cmap="Reds", aspect="auto", vmin=0.0, vmax=rows.max() or 1.0)
    wq = payload["wq"]
    ax.scatter([v - 1.0 for v in wq], range(n), s=18, c="black", zorder=3)
    for start, _end in payload["segments"][1:]:
        ax.axhline(start - 0.5, color="blue", linewidth=1.2)
    for i, _j, _d in payload["boundaries"]:
        ax.axhline(i + 0.5, color="gray", linestyle=":", linewidth=0.8)
    ax.set_xlabel("position quantile")
    ax.set_ylabel("sentence")
    ax.set_yticks(range(n))
    fig.tight_layout()
    fig.savefig(plot_path, dpi=150)
    plt.close(fig)


def main() -> None:
    try:
        cli.main(standalone_mode=True)
    except (CoherenceError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
