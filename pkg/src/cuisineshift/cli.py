"""Command-line pipeline: ingest, train, evaluate, query, render, serve.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
failure. All training paths are single-threaded and reproducible from
(argv, seed, input files); artifact files are byte-stable.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import classifier, corpus, embeddings, layout as layout_mod, transform
from .errors import DataError, NumericalError

_SPLIT_RATIO = 0.8
_SPLIT_SEED = 13


@click.group()
def cli():
    """Cuisine-style classification, embedding queries, diagrams, transforms."""


def _load_corpus(path):
    recipes = corpus.load_corpus(path)
    return recipes, corpus.build_vocabulary(recipes)


def _parse_hidden(ctx, param, value: str):
    try:
        return tuple(int(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


def _parse_ingredients(value: str):
    names = [part.strip() for part in value.split(",")]
    return [n for n in names if n]


def _echo_table(rows, header):
    widths = [
        max(len(str(header[i])), *(len(str(r[i])) for r in rows)) if rows else len(str(header[i]))
        for i in range(len(header))
    ]
    click.echo("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        click.echo("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))


def _fmt(x: float) -> str:
    return f"{x:.6f}"


@cli.command("train-classifier")
@click.option("--data", required=True, help="Recipe JSON corpus.")
@click.option("--out", required=True, help="Where to write the model artifact.")
@click.option("--split-ratio", default=_SPLIT_RATIO, show_default=True, type=float)
@click.option("--split-seed", default=_SPLIT_SEED, show_default=True, type=int)
@click.option("--hidden", default="512,256", show_default=True, callback=_parse_hidden,
              help="Comma-separated hidden layer sizes.")
@click.option("--dropout", default=0.2, show_default=True, type=float)
@click.option("--epochs", default=200, show_default=True, type=int)
@click.option("--batch-size", default=256, show_default=True, type=int)
@click.option("--step-size", default=1e-3, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--loss-png", default=None, help="Optional loss-curve figure.")
@click.option("--quiet", is_flag=True, default=False)
def train_classifier_cmd(data, out, split_ratio, split_seed, hidden, dropout, epochs,
                         batch_size, step_size, seed, loss_png, quiet):
    """Train the cuisine classifier on the train side of a seeded split."""
    recipes, vocab = _load_corpus(data)
    parts = corpus.split(recipes, split_ratio, split_seed)
    config = classifier.MLPConfig(
        hidden_dims=hidden, dropout_rate=dropout, epochs=epochs,
        batch_size=batch_size, step_size=step_size, seed=seed,
    )
    log = None
    if not quiet:
        def log(epoch, loss, elapsed):
            click.echo(f"epoch {epoch + 1}/{epochs}  loss {loss:.4f}  {elapsed:.0f}s", err=True)
    model = classifier.train_classifier(parts.train, vocab, config, log=log)
    classifier.save_model(model, out)
    click.echo(f"trained on {len(parts.train)} recipes "
               f"({vocab.num_ingredients} ingredients, {vocab.num_countries} countries); "
               f"model written to {out}")
    if loss_png:
        from . import reports
        reports.save_loss_curve_png(model.loss_history, loss_png)
        click.echo(f"loss curve written to {loss_png}")


@cli.command("eval")
@click.option("--model", "model_path", required=True)
@click.option("--data", required=True)
@click.option("--split-ratio", default=_SPLIT_RATIO, show_default=True, type=float)
@click.option("--split-seed", default=_SPLIT_SEED, show_default=True, type=int)
@click.option("--on", "subset", default="test", show_default=True,
              type=click.Choice(["test", "train", "all"]))
@click.option("--out", default=None, help="Optional confusion-matrix TSV.")
@click.option("--png", default=None, help="Optional confusion-matrix figure.")
def eval_cmd(model_path, data, split_ratio, split_seed, subset, out, png):
    """Accuracy and confusion matrix on the chosen side of the split."""
    model = classifier.load_model(model_path)
    recipes = corpus.load_corpus(data)
    if subset == "all":
        chosen = recipes
    else:
        parts = corpus.split(recipes, split_ratio, split_seed)
        chosen = parts.train if subset == "train" else parts.test
    report = classifier.evaluate(model, chosen)
    click.echo(f"accuracy {report.accuracy:.4f} on {len(chosen)} {subset} recipes")
    rows = [
        [c, int(report.per_country_counts[i]), int(report.confusion[i, i])]
        for i, c in enumerate(report.countries)
    ]
    _echo_table(rows, header=["country", "recipes", "correct"])
    from . import reports
    if out:
        header, table = reports.confusion_rows(report)
        reports.write_tsv(out, header, table)
        click.echo(f"confusion matrix written to {out}")
    if png:
        reports.save_confusion_png(report, png)
        click.echo(f"confusion figure written to {png}")


@cli.command("probe")
@click.option("--model", "model_path", required=True)
@click.option("--ingredient", required=True)
@click.option("--top", default=None, type=int, help="Show only the top N countries.")
@click.option("--out", default=None, help="Optional TSV output.")
def probe_cmd(model_path, ingredient, top, out):
    """Classify a single-ingredient recipe to probe what one token signals."""
    model = classifier.load_model(model_path)
    pairs = classifier.probe_ingredient(model, corpus.normalize_ingredient(ingredient))
    if top is not None:
        pairs = pairs[:top]
    rows = [[c, _fmt(p)] for c, p in pairs]
    _echo_table(rows, header=["country", "probability"])
    if out:
        from . import reports
        reports.write_tsv(out, ["country", "probability"], rows)
        click.echo(f"written to {out}")


@cli.command("train-embeddings")
@click.option("--data", required=True)
@click.option("--out", required=True)
@click.option("--dim", default=100, show_default=True, type=int)
@click.option("--negatives", default=5, show_default=True, type=int)
@click.option("--epochs", default=10, show_default=True, type=int)
@click.option("--step-size", default=0.025, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--text", default=None, help="Also export vectors as text.")
@click.option("--quiet", is_flag=True, default=False)
def train_embeddings_cmd(data, out, dim, negatives, epochs, step_size, seed, text, quiet):
    """Train country-extended skip-gram embeddings on the whole corpus."""
    recipes, vocab = _load_corpus(data)
    config = embeddings.EmbeddingConfig(
        dim=dim, negative_samples=negatives, epochs=epochs,
        step_size=step_size, seed=seed,
    )
    log = None
    if not quiet:
        def log(epoch, processed):
            click.echo(f"epoch {epoch + 1}/{epochs}  pairs {processed}", err=True)
    space = embeddings.train_embeddings(recipes, vocab, config, log=log)
    embeddings.save_embeddings(space, out)
    click.echo(f"trained {space.num_tokens} token vectors (dim {dim}); written to {out}")
    if text:
        embeddings.export_text(space, text)
        click.echo(f"text export written to {text}")


@cli.command("neighbors")
@click.option("--embeddings", "emb_path", required=True)
@click.option("--token", required=True)
@click.option("-k", default=20, show_default=True, type=int)
@click.option("--kind", default="all", show_default=True,
              type=click.Choice(["all", "ingredient", "country"]))
@click.option("--out", default=None)
def neighbors_cmd(emb_path, token, k, kind, out):
    """Nearest tokens by cosine similarity."""
    space = embeddings.load_embeddings(emb_path)
    pairs = embeddings.nearest(space, corpus.normalize_ingredient(token), k, kind=kind)
    rows = [[i + 1, t, _fmt(s)] for i, (t, s) in enumerate(pairs)]
    _echo_table(rows, header=["rank", "token", "cosine"])
    if out:
        from . import reports
        reports.write_tsv(out, ["rank", "token", "cosine"], rows)
        click.echo(f"written to {out}")


@cli.command("analogy")
@click.option("--embeddings", "emb_path", required=True)
@click.option("--pos", required=True, help="Positive token (e.g. an ingredient).")
@click.option("--minus", required=True, help="Token to subtract (e.g. source country).")
@click.option("--plus", required=True, help="Token to add (e.g. target country).")
@click.option("-k", default=10, show_default=True, type=int)
@click.option("--out", default=None)
def analogy_cmd(emb_path, pos, minus, plus, k, out):
    """Rank ingredients nearest to pos - minus + plus."""
    space = embeddings.load_embeddings(emb_path)
    pairs = embeddings.analogy(space, corpus.normalize_ingredient(pos),
                               corpus.normalize_ingredient(minus),
                               corpus.normalize_ingredient(plus), k)
    rows = [[i + 1, t, _fmt(s)] for i, (t, s) in enumerate(pairs)]
    _echo_table(rows, header=["rank", "ingredient", "cosine"])
    if out:
        from . import reports
        reports.write_tsv(out, ["rank", "ingredient", "cosine"], rows)
        click.echo(f"written to {out}")


@cli.command("authentic")
@click.option("--embeddings", "emb_path", required=True)
@click.option("--country", required=True)
@click.option("-k", default=5, show_default=True, type=int)
@click.option("--out", default=None)
def authentic_cmd(emb_path, country, k, out):
    """Ingredients nearest to a country token: its signature items."""
    space = embeddings.load_embeddings(emb_path)
    pairs = embeddings.authentic_ingredients(space, country, k)
    rows = [[i + 1, t, _fmt(s)] for i, (t, s) in enumerate(pairs)]
    _echo_table(rows, header=["rank", "ingredient", "cosine"])
    if out:
        from . import reports
        reports.write_tsv(out, ["rank", "ingredient", "cosine"], rows)
        click.echo(f"written to {out}")


@cli.command("layout")
@click.option("--embeddings", "emb_path", required=True)
@click.option("--mode", default="largest", show_default=True,
              type=click.Choice(["largest", "smallest"]))
@click.option("--json", "json_path", default=None, help="Write coordinates as JSON.")
@click.option("--svg", default=None, help="Write the country circle as SVG.")
@click.option("--png", default=None, help="Write the country circle as PNG.")
def layout_cmd(emb_path, mode, json_path, svg, png):
    """Compute the spectral circle layout of the countries."""
    space = embeddings.load_embeddings(emb_path)
    lay = layout_mod.spectral_circle_layout(layout_mod.country_similarity(space), mode=mode)
    rows = [[c, _fmt(x), _fmt(y)] for c, (x, y) in lay.as_mapping().items()]
    _echo_table(rows, header=["country", "x", "y"])
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(layout_mod.layout_to_meta(lay), fh, indent=1, sort_keys=True)
            fh.write("\n")
        click.echo(f"coordinates written to {json_path}")
    if svg:
        with open(svg, "w", encoding="utf-8") as fh:
            fh.write(layout_mod.render_svg(lay))
        click.echo(f"svg written to {svg}")
    if png:
        from . import reports
        reports.save_diagram_png(lay, png)
        click.echo(f"png written to {png}")


def _load_model_and_space(model_path, emb_path):
    model = classifier.load_model(model_path)
    space = embeddings.load_embeddings(emb_path)
    if model.vocab.content_hash() != space.vocab.content_hash():
        raise DataError("classifier and embeddings were built on different vocabularies")
    return model, space


@cli.command("diagram")
@click.option("--model", "model_path", required=True)
@click.option("--embeddings", "emb_path", required=True)
@click.option("--ingredients", required=True, help="Comma-separated ingredient list.")
@click.option("--mode", default="largest", show_default=True,
              type=click.Choice(["largest", "smallest"]))
@click.option("--svg", default=None)
@click.option("--png", default=None)
@click.option("--out", default=None, help="Optional TSV of the distribution.")
def diagram_cmd(model_path, emb_path, ingredients, mode, svg, png, out):
    """Place one recipe on the country circle."""
    model, space = _load_model_and_space(model_path, emb_path)
    lay = layout_mod.spectral_circle_layout(layout_mod.country_similarity(space), mode=mode)
    names = _parse_ingredients(ingredients)
    dist = transform.classify_ingredients(corpus.normalize_ingredients(names), model)
    point = layout_mod.barycentric_position(dist.as_mapping(), lay)
    click.echo(f"diagram point ({point.x:.6f}, {point.y:.6f})")
    rows = [[c, _fmt(p)] for c, p in dist.top()]
    _echo_table(rows, header=["country", "probability"])
    if out:
        from . import reports
        reports.write_tsv(out, ["country", "probability"], rows)
        click.echo(f"written to {out}")
    if svg:
        with open(svg, "w", encoding="utf-8") as fh:
            fh.write(layout_mod.render_svg(lay, points=[point], labels=["recipe"]))
        click.echo(f"svg written to {svg}")
    if png:
        from . import reports
        reports.save_diagram_png(lay, png, points=[point], labels=["recipe"])
        click.echo(f"png written to {png}")


@cli.command("suggest")
@click.option("--model", "model_path", required=True)
@click.option("--embeddings", "emb_path", required=True)
@click.option("--ingredients", required=True, help="Comma-separated ingredient list.")
@click.option("--target", required=True)
@click.option("--ingredient", required=True, help="The ingredient to replace.")
@click.option("-k", default=10, show_default=True, type=int)
@click.option("--strategy", default="analogy", show_default=True,
              type=click.Choice(["analogy", "max-prob"]))
@click.option("--out", default=None)
def suggest_cmd(model_path, emb_path, ingredients, target, ingredient, k, strategy, out):
    """Candidate replacements for one ingredient of a recipe."""
    model, space = _load_model_and_space(model_path, emb_path)
    session = transform.new_session(_parse_ingredients(ingredients), target, model)
    if strategy == "analogy":
        suggestions = transform.suggest_by_analogy(session, ingredient, model, space, k=k)
    else:
        suggestions = transform.suggest_by_max_prob(session, ingredient, model, k=k)
    rows = [
        [
            i + 1,
            s.candidate,
            _fmt(s.analogy_similarity) if s.analogy_similarity is not None else "-",
            _fmt(s.prob_target_after),
            _fmt(s.prob_source_after),
        ]
        for i, s in enumerate(suggestions)
    ]
    header = ["rank", "candidate", "similarity", "p_target_after", "p_source_after"]
    click.echo(f"source {session.source_country}; replacing {ingredient!r} "
               f"toward {session.target_country}")
    _echo_table(rows, header=header)
    if out:
        from . import reports
        reports.write_tsv(out, header, rows)
        click.echo(f"written to {out}")


def _parse_swap(value: str):
    parts = value.split("=")
    if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
        raise click.BadParameter(f"expected REPLACED=REPLACEMENT, got {value!r}")
    return parts[0].strip(), parts[1].strip()


@cli.command("transform")
@click.option("--model", "model_path", required=True)
@click.option("--embeddings", "emb_path", required=True)
@click.option("--ingredients", required=True, help="Comma-separated ingredient list.")
@click.option("--target", required=True)
@click.option("--apply", "applies", multiple=True,
              help="REPLACED=REPLACEMENT; repeat for a sequence of swaps.")
@click.option("--auto", is_flag=True, default=False,
              help="Greedy automatic transformation instead of explicit swaps.")
@click.option("--max-steps", default=10, show_default=True, type=int)
@click.option("--threshold", default=0.95, show_default=True, type=float)
@click.option("--out", default=None, help="Write the session record as JSON.")
@click.option("--tsv", default=None, help="Write the step table as TSV.")
@click.option("--svg", default=None, help="Write the diagram trail as SVG.")
@click.option("--png", default=None, help="Write the diagram trail as PNG.")
def transform_cmd(model_path, emb_path, ingredients, target, applies, auto, max_steps,
                  threshold, out, tsv, svg, png):
    """Steer a recipe toward a target country, step by step."""
    if auto and applies:
        raise click.UsageError("--auto and --apply are mutually exclusive")
    model, space = _load_model_and_space(model_path, emb_path)
    names = _parse_ingredients(ingredients)
    if auto:
        session = transform.auto_transform(names, target, model, space,
                                           max_steps=max_steps, threshold=threshold)
    else:
        session = transform.new_session(names, target, model)
        for value in applies:
            replaced, replacement = _parse_swap(value)
            transform.apply_substitution(session, replaced, replacement, model)
    initial_source = session.states[0].distribution.argmax_country()
    header = ["step", "replaced", "replacement",
              f"p_{initial_source}", f"p_{session.target_country}"]
    rows = []
    for i, state in enumerate(session.states):
        rows.append(
            [
                i,
                state.applied[0] if state.applied else "-",
                state.applied[1] if state.applied else "-",
                _fmt(state.distribution.prob(initial_source)),
                _fmt(state.distribution.prob(session.target_country)),
            ]
        )
    _echo_table(rows, header=header)
    if session.stop_reason:
        click.echo(f"stopped: {session.stop_reason}")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(transform.session_record(session), fh, indent=1, sort_keys=True)
            fh.write("\n")
        click.echo(f"session record written to {out}")
    if tsv:
        from . import reports
        reports.write_tsv(tsv, header, rows)
        click.echo(f"step table written to {tsv}")
    if svg or png:
        lay = layout_mod.spectral_circle_layout(layout_mod.country_similarity(space))
        points = [
            layout_mod.barycentric_position(s.distribution.as_mapping(), lay)
            for s in session.states
        ]
        labels = [str(i) for i in range(len(points))]
        if svg:
            with open(svg, "w", encoding="utf-8") as fh:
                fh.write(layout_mod.render_svg(lay, points=points, labels=labels))
            click.echo(f"trail svg written to {svg}")
        if png:
            from . import reports
            reports.save_diagram_png(lay, png, points=points, labels=labels)
            click.echo(f"trail png written to {png}")


@cli.command("serve")
@click.option("--model", "model_path", default=None,
              help="Model artifact; falls back to $MODEL_PATH.")
@click.option("--embeddings", "emb_path", default=None,
              help="Embedding artifact; falls back to $EMBEDDING_PATH.")
@click.option("--host", default=None, help="Bind address; falls back to $BIND_ADDR.")
@click.option("--port", default=None, type=int, help="Port; falls back to $PORT.")
@click.option("--static", "static_dir", default=None,
              help="Directory with the web UI bundle, served at /.")
def serve_cmd(model_path, emb_path, host, port, static_dir):
    """Run the HTTP service."""
    model_path = model_path or os.environ.get("MODEL_PATH")
    emb_path = emb_path or os.environ.get("EMBEDDING_PATH")
    host = host or os.environ.get("BIND_ADDR", "127.0.0.1")
    port = port if port is not None else int(os.environ.get("PORT", "8000"))
    if not model_path or not emb_path:
        raise click.UsageError("--model and --embeddings (or MODEL_PATH/EMBEDDING_PATH) are required")
    from . import service
    import uvicorn
    state = service.load_service_state(model_path, emb_path)
    app = service.create_app(state, static_dir=static_dir)
    click.echo(f"serving on http://{host}:{port}", err=True)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main(argv=None) -> int:
    """Run the CLI and map errors to the documented exit codes."""
    try:
        cli.main(args=argv, prog_name="cuisineshift", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 3
    return 0


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
