"""Command-line entry point.

Exit codes: 0 on success, 1 on operational failure (bad bundle, busy
port, unwritable output), 2 on usage errors (argparse's native code).
ANSI styling is dropped when NO_COLOR is set or stdout is not a tty.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import sys
from pathlib import Path

from topiclens import cache as cache_mod
from topiclens.bundle import BundleError, bundle_hash, load_bundle, validate_bundle
from topiclens.manifold import CurveFitError, LayoutError, UmapParams

_RED = "31"
_YELLOW = "33"
_GREEN = "32"


def _style(text: str, color: str, stream) -> str:
    if os.environ.get("NO_COLOR") is not None:
        return text
    if not hasattr(stream, "isatty") or not stream.isatty():
        return text
    return f"\x1b[{color}m{text}\x1b[0m"


def _fail(message: str) -> int:
    sys.stderr.write(_style("error: ", _RED, sys.stderr) + message + "\n")
    return 1


def _params_from_args(args: argparse.Namespace) -> UmapParams:
    params = UmapParams()
    if getattr(args, "n_neighbors", None) is not None:
        if args.n_neighbors < 1:
            raise BundleError("--n-neighbors must be >= 1")
        params.n_neighbors = args.n_neighbors
    if getattr(args, "min_dist", None) is not None:
        if args.min_dist <= 0:
            raise BundleError("--min-dist must be > 0")
        params.min_dist = args.min_dist
    if getattr(args, "epochs", None) is not None:
        if args.epochs < 1:
            raise BundleError("--epochs must be >= 1")
        params.epochs = args.epochs
    return params


def _cmd_validate(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    report = validate_bundle(bundle)
    out = sys.stdout
    for issue in report.errors:
        where = f" [{issue.location}]" if issue.location else ""
        out.write(_style("ERROR", _RED, out) + f" {issue.code}{where}: "
                  f"{issue.message}\n")
    for issue in report.warnings:
        where = f" [{issue.location}]" if issue.location else ""
        out.write(_style("WARN", _YELLOW, out) + f" {issue.code}{where}: "
                  f"{issue.message}\n")
    if report.ok:
        out.write(_style("OK", _GREEN, out) +
                  f" bundle valid: {bundle.n_topics} topics, "
                  f"{bundle.n_docs} documents, {bundle.n_terms} terms\n")
        return 0
    out.write(f"{len(report.errors)} error(s), "
              f"{len(report.warnings)} warning(s)\n")
    return 1


def _cmd_compute(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    params = _params_from_args(args)
    result = cache_mod.build_cache(bundle, params=params, seed=args.seed)
    path = cache_mod.save_cache(args.bundle, result)
    sys.stdout.write(f"cache written: {path}\n")
    sys.stdout.write(f"bundle hash: {result['bundle_hash']}\n")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from topiclens import server

    try:
        server.serve(args.bundle, port=args.port, precompute=args.precompute)
    except server.InvalidBundleError as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(f"cannot bind port {args.port}: {exc}")
    return 0


def _cmd_figures(args: argparse.Namespace) -> int:
    from topiclens import figures

    bundle = load_bundle(args.bundle)
    result = cache_mod.ensure_cache(bundle)
    overrides: dict = {}
    if args.width is not None:
        overrides["width"] = args.width
    if args.height is not None:
        overrides["height"] = args.height
    if args.palette_file is not None:
        palette = json.loads(Path(args.palette_file).read_text(encoding="utf-8"))
        if (not isinstance(palette, list) or not palette
                or not all(isinstance(c, str) for c in palette)):
            raise BundleError(
                f"{args.palette_file} must be a non-empty JSON array of colors")
        overrides["palette"] = palette
    manifest = figures.export_all(bundle, result, args.out_dir, overrides)
    sys.stdout.write(f"{len(manifest['files'])} figure(s) written to "
                     f"{args.out_dir}\n")
    for entry in manifest["skipped"]:
        sys.stdout.write(f"skipped {entry['kind']}"
                         f"{' ' + entry['subject'] if entry['subject'] else ''}: "
                         f"{entry['reason']}\n")
    return 0


def _cmd_pack(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle)
    report = validate_bundle(bundle)
    if not report.ok:
        lines = "; ".join(f"{i.code}: {i.message}" for i in report.errors)
        raise BundleError(f"bundle failed validation: {lines}")
    cache_mod.ensure_cache(bundle)

    out = Path(args.out_dir)
    target = out / "bundle"
    target.mkdir(parents=True, exist_ok=True)
    src = Path(args.bundle)
    names = {"manifest.json"}
    manifest = bundle.manifest
    for key in ("vocabulary", "topic_term", "doc_topic", "documents",
                "doc_term", "doc_embeddings", "topic_names"):
        if key in manifest:
            names.add(manifest[key])
    if (src / "topic_names.json").is_file():
        names.add("topic_names.json")
    for name in sorted(names):
        if (src / name).is_file():
            shutil.copy2(src / name, target / name)
    cache_file = cache_mod.cache_path(src)
    (target / cache_mod.CACHE_DIR).mkdir(exist_ok=True)
    shutil.copy2(cache_file, target / cache_mod.CACHE_DIR / cache_mod.CACHE_NAME)

    (out / "Dockerfile").write_text(
        "FROM python:3.11-slim\n"
        "RUN pip install --no-cache-dir topiclens uvicorn\n"
        "COPY bundle /srv/bundle\n"
        "ENV TOPICLENS_HOST=0.0.0.0\n"
        "EXPOSE 8000\n"
        'CMD ["topiclens", "serve", "/srv/bundle", "--port", "8000", '
        '"--precompute"]\n',
        encoding="utf-8")
    (out / "README.txt").write_text(
        "Deployable topiclens bundle.\n"
        "\n"
        "Run locally:\n"
        "    topiclens serve bundle --port 8000 --precompute\n"
        "\n"
        "Or build and run the container:\n"
        "    docker build -t topiclens-app .\n"
        "    docker run -p 8000:8000 topiclens-app\n"
        "\n"
        f"Bundle hash: {bundle_hash(src)}\n",
        encoding="utf-8")
    sys.stdout.write(f"deployable bundle written to {out}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topiclens",
        description="Inspect, precompute, serve and export topic model "
                    "interpretation bundles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a bundle and print the report")
    p.add_argument("bundle")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("compute", help="precompute the interpretation cache")
    p.add_argument("bundle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-neighbors", type=int, default=None)
    p.add_argument("--min-dist", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("serve", help="run the HTTP API server")
    p.add_argument("bundle")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--precompute", action="store_true")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("figures", help="export all SVG figures")
    p.add_argument("bundle")
    p.add_argument("out_dir")
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--height", type=int, default=None)
    p.add_argument("--palette-file", default=None)
    p.set_defaults(func=_cmd_figures)

    p = sub.add_parser("pack", help="emit a deployable directory")
    p.add_argument("bundle")
    p.add_argument("out_dir")
    p.set_defaults(func=_cmd_pack)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BundleError as exc:
        return _fail(str(exc))
    except (CurveFitError, LayoutError) as exc:
        return _fail(str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
