"""Command-line interface.

Subcommands:
  ingest    load + validate a GraphML file and build the embedding cache
  path      sample a path between two concepts; optionally export
            GraphML/HTML/PNG renderings of the context subgraph
  generate  run the pre-programmed pipeline and export md/csv/json + figure
  chat      run the autonomous group chat with live stdin interventions
  serve     start the HTTP session service
  export    re-export the document of a stored session

Everything runs offline by default (hash embeddings); point [chat] and
[embeddings] at real endpoints in the config file for live runs.
"""

from __future__ import annotations

import argparse
import json
import queue
import sys
import threading
from pathlib import Path

from . import __version__
from .agents.groupchat import GroupChatConfig, run_group_chat
from .agents.profiles import group_chat_roster
from .agents.scripted import ScriptedPipelineConfig, run_scripted_pipeline
from .agents.tools import ToolContext, build_default_registry
from .config import (
    AppConfig,
    build_chat_gateway,
    build_embedding_gateway,
    build_search_client,
    embedding_cache_path,
    load_config,
    load_graph_from_config,
    path_config_from,
    prepare_store,
)
from .errors import IdeagraphError
from .graph.embeddings import ensure_embeddings, nearest_node
from .novelty.assess import assess_novelty
from .pathing.search import sample as sample_dispatch
from .pathing.viz import export_graphml, export_html, render_figure
from .proposal.document import document_slug, export_document
from .service.sessions import BackendBundle, SessionManager, SessionRequest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ideagraph", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"ideagraph {__version__}")
    parser.add_argument("--config", type=Path, default=None, help="TOML config file")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="load a GraphML file and build embeddings")
    ingest.add_argument("--graph", type=Path, required=True)
    ingest.add_argument("--skip-embeddings", action="store_true")

    path = sub.add_parser("path", help="sample a concept path")
    path.add_argument("--graph", type=Path, default=None)
    path.add_argument("--from", dest="source", required=True, metavar="KEYWORD")
    path.add_argument("--to", dest="target", required=True, metavar="KEYWORD")
    path.add_argument("--alpha", type=float, default=None)
    path.add_argument("--waypoints", type=int, default=None)
    path.add_argument("--hops", type=int, default=None)
    path.add_argument("--seed", type=int, default=None)
    path.add_argument("--mode", choices=["random", "shortest"], default="random")
    path.add_argument("--out-dir", type=Path, default=None,
                      help="write subgraph.graphml/.html and figure.png here")

    generate = sub.add_parser("generate", help="run the scripted pipeline")
    generate.add_argument("--graph", type=Path, default=None)
    generate.add_argument("--keyword-1", default=None)
    generate.add_argument("--keyword-2", default=None)
    generate.add_argument("--alpha", type=float, default=None)
    generate.add_argument("--waypoints", type=int, default=None)
    generate.add_argument("--hops", type=int, default=None)
    generate.add_argument("--seed", type=int, default=None)
    generate.add_argument("--count", type=int, default=1, help="sequential sessions to run")
    generate.add_argument("--novelty", action="store_true", help="rate against the literature")
    generate.add_argument("--out-dir", type=Path, default=Path("./out"))

    chat = sub.add_parser("chat", help="run the autonomous group chat")
    chat.add_argument("--graph", type=Path, default=None)
    chat.add_argument("--keyword-1", default=None)
    chat.add_argument("--keyword-2", default=None)
    chat.add_argument("--max-turns", type=int, default=30)
    chat.add_argument("--seed", type=int, default=None)
    chat.add_argument("--out-dir", type=Path, default=Path("./out"))
    chat.add_argument("--no-input", action="store_true", help="disable stdin interventions")

    serve = sub.add_parser("serve", help="start the HTTP session service")
    serve.add_argument("--graph", type=Path, default=None)
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)

    export = sub.add_parser("export", help="re-export a stored session's document")
    export.add_argument("session_id")
    export.add_argument("--data-dir", type=Path, default=None)
    export.add_argument("--out-dir", type=Path, default=Path("./out"))
    return parser


def _engine(config: AppConfig, graph_override):
    g = load_graph_from_config(config, graph_override)
    embed_gateway = build_embedding_gateway(config)
    graph_path = Path(graph_override or config.get("graph", "path", "graph.graphml"))
    store = prepare_store(config, g, graph_path, embed_gateway)
    return g, store, embed_gateway


def cmd_ingest(args, config: AppConfig) -> int:
    g = load_graph_from_config(config, args.graph)
    print(f"loaded {g.node_count} nodes, {g.edge_count} edges from {args.graph}")
    if not args.skip_embeddings:
        gateway = build_embedding_gateway(config)
        cache = embedding_cache_path(config, args.graph)
        store = ensure_embeddings(g, gateway, cache)
        print(f"embeddings ready: {len(store.vectors)} vectors (dim {store.dimension}) -> {cache}")
    return 0


def cmd_path(args, config: AppConfig) -> int:
    g, store, embed_gateway = _engine(config, args.graph)
    cfg = path_config_from(
        config, alpha=args.alpha, k_waypoints=args.waypoints, hops=args.hops, seed=args.seed
    )
    cfg.mode = args.mode
    source_id, s_sim = nearest_node(g, store, args.source, embed_gateway)
    target_id, t_sim = nearest_node(g, store, args.target, embed_gateway)
    print(f"matched {args.source!r} -> {g.label(source_id)!r} ({s_sim:.3f}), "
          f"{args.target!r} -> {g.label(target_id)!r} ({t_sim:.3f})")
    sample = sample_dispatch(g, store, source_id, target_id, cfg)
    print(sample.path_string)
    print(f"subgraph: {sample.subgraph.node_count} nodes, {sample.subgraph.edge_count} edges")
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        slug = document_slug(sample.labels[0], sample.labels[-1])
        print(f"wrote {export_graphml(sample, args.out_dir / f'{slug}.graphml')}")
        print(f"wrote {export_html(sample, args.out_dir / f'{slug}.html')}")
        print(f"wrote {render_figure(sample, args.out_dir / f'{slug}.png')}")
    return 0


def cmd_generate(args, config: AppConfig) -> int:
    g, store, _ = _engine(config, args.graph)
    base_seed = args.seed if args.seed is not None else int(config.get("path", "seed", 0))
    for i in range(args.count):
        gateway = build_chat_gateway(config)
        path_cfg = path_config_from(
            config, alpha=args.alpha, k_waypoints=args.waypoints, hops=args.hops,
            seed=base_seed + i,
        )
        novelty_hook = None
        if args.novelty:
            search = build_search_client(config)
            scorer = build_chat_gateway(config)
            novelty_hook = lambda prop: assess_novelty(prop, scorer, search)  # noqa: E731
        result = run_scripted_pipeline(
            g, store, gateway,
            keyword_1=args.keyword_1, keyword_2=args.keyword_2,
            cfg=ScriptedPipelineConfig(
                path=path_cfg, temperature=float(config.get("chat", "temperature", 0.7))
            ),
            novelty=novelty_hook,
        )
        paths = export_document(result.document, args.out_dir)
        figure = render_figure(
            result.sample,
            args.out_dir / f"{document_slug(result.document.start_node, result.document.end_node)}.png",
        )
        for kind, written in {**paths, "png": figure}.items():
            print(f"wrote {written}")
        _maybe_render_pdf(config, paths["md"])
    return 0


def _maybe_render_pdf(config: AppConfig, md_path: Path):
    """Hand the Markdown to an external converter when one is configured.

    [export] pdf_command supports {md} and {pdf} placeholders, e.g.
    pdf_command = "pandoc {md} -o {pdf}".
    """
    command = str(config.get("export", "pdf_command", "")).strip()
    if not command:
        return
    import shlex
    import subprocess

    pdf_path = md_path.with_suffix(".pdf")
    argv = [part.format(md=str(md_path), pdf=str(pdf_path)) for part in shlex.split(command)]
    try:
        subprocess.run(argv, check=True, timeout=120)
        print(f"wrote {pdf_path}")
    except Exception as exc:
        print(f"pdf conversion failed ({exc}); markdown export is unaffected", file=sys.stderr)


def cmd_chat(args, config: AppConfig) -> int:
    g, store, _ = _engine(config, args.graph)
    gateway = build_chat_gateway(config)
    seed = args.seed if args.seed is not None else int(config.get("path", "seed", 0))
    ctx = ToolContext(
        graph=g, store=store, gateway=gateway,
        path_config=path_config_from(config, seed=seed),
        search=build_search_client(config),
        novelty_gateway=build_chat_gateway(config),
    )
    registry = build_default_registry(ctx)
    human_queue: queue.Queue = queue.Queue()
    if not args.no_input and sys.stdin.isatty():
        threading.Thread(
            target=_stdin_pump, args=(human_queue,), daemon=True
        ).start()
        print("(type a line at any time to steer the chat; Ctrl-D to stop input)")
    if args.keyword_1 and args.keyword_2:
        task = (
            "Develop a research proposal using the knowledge path between "
            f"{args.keyword_1!r} and {args.keyword_2!r}. Rate its novelty and feasibility."
        )
    else:
        task = ("Develop a research proposal using a knowledge path between randomly "
                "selected concepts. Rate its novelty and feasibility.")
    result = run_group_chat(
        task, group_chat_roster(), registry,
        GroupChatConfig(
            max_turns=args.max_turns,
            temperature=float(config.get("chat", "temperature", 0.7)),
            human_timeout=300.0,
        ),
        gateway,
        tool_context=ctx,
        human_queue=human_queue,
        on_entry=lambda e: print(f"[{e.seq:03d}] {e.author} ({e.kind}): {e.content[:400]}"),
    )
    if result.document is not None:
        paths = export_document(result.document, args.out_dir)
        for written in paths.values():
            print(f"wrote {written}")
    else:
        print("chat ended without a complete document")
    return 0


def cmd_serve(args, config: AppConfig) -> int:
    import uvicorn

    from .service.api import create_app

    g, store, _ = _engine(config, args.graph)
    backends = BackendBundle(
        make_gateway=lambda: build_chat_gateway(config),
        make_search=lambda: build_search_client(config),
    )
    manager = SessionManager(
        g, store, backends, data_dir=Path(config.get("service", "data_dir", "./ideagraph-data"))
    )
    manager.recover()
    app = create_app(manager)
    host = args.host or config.get("service", "host", "127.0.0.1")
    port = args.port or int(config.get("service", "port", 8230))
    uvicorn.run(app, host=host, port=port)
    return 0


def cmd_export(args, config: AppConfig) -> int:
    data_dir = args.data_dir or Path(config.get("service", "data_dir", "./ideagraph-data"))
    meta_path = Path(data_dir) / f"{args.session_id}.meta.json"
    if not meta_path.exists():
        print(f"no session {args.session_id} under {data_dir}", file=sys.stderr)
        return 1
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    json_export = meta.get("exports", {}).get("json")
    if not json_export or not Path(json_export).exists():
        print("session has no stored document", file=sys.stderr)
        return 1
    from .proposal.document import ResearchDocument

    document = ResearchDocument.from_dict(json.loads(Path(json_export).read_text(encoding="utf-8")))
    for written in export_document(document, args.out_dir).values():
        print(f"wrote {written}")
    return 0


def _stdin_pump(human_queue: queue.Queue):
    for line in sys.stdin:
        line = line.strip()
        if line:
            human_queue.put(line)


COMMANDS = {
    "ingest": cmd_ingest,
    "path": cmd_path,
    "generate": cmd_generate,
    "chat": cmd_chat,
    "serve": cmd_serve,
    "export": cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = load_config(args.config)
    try:
        return COMMANDS[args.command](args, config)
    except IdeagraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
