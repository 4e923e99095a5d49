"""Command-line interface: ingest, index, search, serve, eval."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click
import yaml

from .ingest.corpus import build_corpus
from .ingest.crawl import fetch_site
from .pipeline.answer import PipelineConfig
from .providers.config import build_providers, load_provider_config
from .retrieval.engine import retrieve
from .retrieval.index import RetrievalIndex, load_faq_file, load_index, save_index
from .retrieval.types import RetrievalConfig
from .service.app import create_app
from .service.store import ChatStore

logger = logging.getLogger(__name__)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    return yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}


def _providers_from_config(config: dict) -> dict:
    return build_providers(load_provider_config(config))


def _retrieval_config(config: dict, strategies: str | None = None,
                      rerank: bool | None = None) -> RetrievalConfig:
    raw = dict(config.get("retrieval", {}))
    if strategies:
        raw["strategies"] = tuple(s.strip() for s in strategies.split(",") if s.strip())
    if rerank is not None:
        raw["rerank"] = rerank
    known = {f.name for f in RetrievalConfig.__dataclass_fields__.values()}
    return RetrievalConfig(**{k: v for k, v in raw.items() if k in known})


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool):
    """Self-hostable retrieval-augmented chatbot for admission questions."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.option("--seeds", type=click.Path(exists=True),
              help="File with one seed URL per line.")
@click.option("--from-html-dir", "html_dir", type=click.Path(exists=True),
              help="Offline mode: read *.html files from a directory.")
@click.option("--out", required=True, type=click.Path(),
              help="Document store output directory.")
@click.option("--max-pages", default=500, show_default=True)
@click.option("--same-host-only/--any-host", default=True, show_default=True)
def ingest(seeds, html_dir, out, max_pages, same_host_only):
    """Build the Markdown knowledge base from a crawl or local HTML files."""
    if bool(seeds) == bool(html_dir):
        raise click.UsageError("pass exactly one of --seeds or --from-html-dir")
    if seeds:
        urls = [line.strip() for line in Path(seeds).read_text().splitlines()
                if line.strip() and not line.startswith("#")]
        pages, errors = fetch_site(urls, same_host_only=same_host_only,
                                   max_pages=max_pages)
        for err in errors:
            click.echo(f"warning: {err}", err=True)
    else:
        pages = []
        for path in sorted(Path(html_dir).glob("*.html")):
            pages.append((f"file:///{path.stem}", path.read_text(encoding="utf-8")))
        if not pages:
            raise click.ClickException(f"no *.html files in {html_dir}")
    manifest = build_corpus(pages, out_dir=out)
    click.echo(f"stored {manifest.page_count} documents "
               f"(mean {manifest.mean_token_length:.1f} tokens) in {out} "
               f"[build {manifest.build_id}]")


@main.command("index")
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--faq", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True))
def index_cmd(corpus, faq, out, config_path):
    """Build the retrieval index (inverted index + embeddings + FAQ)."""
    from .ingest.corpus import load_manifest

    config = _load_config(config_path)
    providers = _providers_from_config(config)
    manifest = load_manifest(corpus)
    faqs = load_faq_file(faq)
    index = RetrievalIndex(manifest, faqs, providers["embedding"])
    save_index(index, out, corpus)
    click.echo(f"indexed {index.n_docs} documents, {index.n_faqs} FAQs -> {out}")


@main.command()
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True))
@click.option("--query", required=True)
@click.option("--strategies", default="bm25,faq", show_default=True)
@click.option("--rerank", is_flag=True, default=False)
@click.option("--k", default=10, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True))
def search(index_dir, query, strategies, rerank, k, config_path):
    """Run a retrieval query and print a ranked table."""
    config = _load_config(config_path)
    providers = _providers_from_config(config)
    index = load_index(index_dir, providers["embedding"])
    rconfig = _retrieval_config(config, strategies, rerank)
    ranked = retrieve(index, query, rconfig, mode="eval",
                      generator=providers.get("generator"),
                      reranker=providers.get("reranker"))
    click.echo(f"{'rank':>4}  {'score':>10}  doc")
    for rank, (doc_id, score) in enumerate(ranked.entries[:k], start=1):
        doc = index.document(doc_id)
        click.echo(f"{rank:>4}  {score:>10.6f}  {doc_id}  ({doc.title})")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
def serve(config_path, host, port):
    """Run the chat service (config covers providers, index, store, admin)."""
    import uvicorn

    config = _load_config(config_path)
    providers = _providers_from_config(config)
    index = load_index(config["index_dir"], providers["embedding"])
    store = ChatStore(config.get("store_path", "admitbot.db"))
    pconfig = PipelineConfig(retrieval=_retrieval_config(config))
    app = create_app(store, index, providers["generator"],
                     reranker=providers.get("reranker"),
                     pipeline_config=pconfig,
                     admin_token=str(config.get("admin_token", "")))
    listen = config.get("listen", {})
    uvicorn.run(app, host=listen.get("host", host), port=int(listen.get("port", port)))


@main.command("eval")
@click.option("--index", "index_dir", required=True, type=click.Path(exists=True))
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["retrieval", "generation", "both"]),
              default="retrieval", show_default=True)
@click.option("--strategies", default="bm25,faq", show_default=True)
@click.option("--rerank", is_flag=True, default=False)
@click.option("--report", "report_path", type=click.Path())
@click.option("--per-case", "per_case_path", type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True))
def eval_cmd(index_dir, dataset, mode, strategies, rerank, report_path,
             per_case_path, config_path):
    """Run the offline evaluation and write a JSON metric report."""
    from .evalharness.dataset import load_dataset
    from .evalharness.runner import EvalOptions, run_eval

    config = _load_config(config_path)
    providers = _providers_from_config(config)
    index = load_index(index_dir, providers["embedding"])
    cases, summary = load_dataset(dataset)
    click.echo(f"dataset: {summary.n_cases} cases "
               f"({summary.n_answerable} answerable, "
               f"{summary.n_unanswerable} unanswerable)")
    rconfig = _retrieval_config(config, strategies, rerank)
    report, per_case = run_eval(
        index, rconfig, cases,
        generator=providers.get("generator"),
        reranker=providers.get("reranker"),
        embedder=providers.get("embedding"),
        opts=EvalOptions(mode=mode),
    )
    text = json.dumps(report, indent=2)
    if report_path:
        Path(report_path).write_text(text + "\n", encoding="utf-8")
        click.echo(f"report written to {report_path}")
    else:
        click.echo(text)
    if per_case_path:
        with open(per_case_path, "w", encoding="utf-8") as fh:
            for row in per_case:
                fh.write(json.dumps(row) + "\n")
        click.echo(f"per-case rows written to {per_case_path}")


if __name__ == "__main__":
    main(sys.argv[1:])
