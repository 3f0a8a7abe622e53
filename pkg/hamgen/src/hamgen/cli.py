"""Command line front end: hamgen generate <spec.json> [-o OUT]."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .basis import BasisError
from .families import SpecError, generate, load_spec, write_family, write_manifest
from .reductions import GenerationError
from .scf import ScfError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamgen",
        description="Generate Hamiltonian family JSON files from molecule specs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", help="run one spec and write the family file")
    gen.add_argument("spec", help="path to a molecule spec JSON file")
    gen.add_argument(
        "-o",
        "--output",
        default=None,
        help="family JSON path (default: <family name>.json in the working directory)",
    )
    gen.add_argument(
        "--manifest",
        default=None,
        help="sidecar manifest path (default: output with .manifest.txt suffix)",
    )
    gen.add_argument(
        "-q", "--quiet", action="store_true", help="suppress progress output"
    )
    return parser


def run_generate(args) -> int:
    try:
        spec = load_spec(args.spec)
    except (SpecError, BasisError, OSError) as exc:
        print(f"hamgen: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        n_nodes = 1
        for g in spec.grids:
            n_nodes *= g.size
        print(
            f"hamgen: generating {spec.name} "
            f"({spec.molecule}/{spec.basis}, {n_nodes} nodes)",
            file=sys.stderr,
        )
    try:
        family, manifest = generate(spec)
    except (GenerationError, BasisError, ScfError) as exc:
        print(f"hamgen: generation failed: {exc}", file=sys.stderr)
        return 1
    out = Path(args.output) if args.output else Path(f"{spec.name}.json")
    manifest_path = (
        Path(args.manifest)
        if args.manifest
        else out.with_suffix(".manifest.txt")
    )
    write_family(family, str(out))
    write_manifest(manifest, str(manifest_path))
    if not args.quiet:
        print(
            f"hamgen: wrote {out} ({len(family['terms'])} terms) and {manifest_path}",
            file=sys.stderr,
        )
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "generate":
        return run_generate(args)
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
