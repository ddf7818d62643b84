"""Command-line entry point ``normnet``.

Exit codes: 0 success, 1 negative answer (``check-equiv``, ``roundtrip``),
2 unreadable or invalid input, 3 data not realisable by a normal network.
"""

from __future__ import annotations

import argparse
import sys

from .distances import min_distance_matrix, multiset_distances, outgroup_max_vector
from .equivalence import are_equivalent
from .errors import InfeasibleSpec, NetworkError, NotRealizable, ParseError, ValidationError
from .generator import GenSpec, generate
from .io import format_number, parse_matrix, parse_network, write_matrix, write_network
from .reconstruct import equidistant_normal, reticulation_pair_normal


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _cmd_distances(args) -> int:
    net, w = parse_network(_read(args.network))
    D = min_distance_matrix(net, w)
    v = None
    if args.outgroup:
        v = outgroup_max_vector(net, w, args.outgroup)
        D = D.without(args.outgroup)
    text = write_matrix(D, v)
    if args.multiset:
        ms = multiset_distances(net, w)
        lines = ["multiset"]
        for i, x in enumerate(net.taxa):
            for y in net.taxa[i + 1:]:
                lines.append(f"{x} {y} " + " ".join(format_number(d) for d in ms[(x, y)]))
        text += "\n".join(lines) + "\n"
    sys.stdout.write(text)
    return 0


def _cmd_reconstruct_eq(args) -> int:
    D, _ = parse_matrix(_read(args.matrix))
    net, w = equidistant_normal(D)
    print(write_network(net, w))
    return 0


def _cmd_reconstruct_rp(args) -> int:
    D, v = parse_matrix(_read(args.matrix))
    if v is None:
        raise ValidationError(["matrix file has no outgroup section"])
    net, w = reticulation_pair_normal(D, v)
    print(write_network(net, w))
    return 0


def _spec(args, outgroup: bool) -> GenSpec:
    return GenSpec(args.leaves, args.rets, args.cls, with_outgroup=outgroup, seed=args.seed)


def _cmd_generate(args) -> int:
    net, w = generate(_spec(args, args.outgroup))
    print(write_network(net, w))
    return 0


def _cmd_check_equiv(args) -> int:
    a = parse_network(_read(args.a))
    b = parse_network(_read(args.b))
    same = are_equivalent(*a, *b)
    print("equivalent" if same else "not equivalent")
    return 0 if same else 1


def _cmd_roundtrip(args) -> int:
    rp = args.cls == "rp"
    net, w = generate(_spec(args, rp))
    # go through both text formats so the whole pipeline is exercised
    net, w = parse_network(write_network(net, w))
    D = min_distance_matrix(net, w)
    if rp:
        v = outgroup_max_vector(net, w, "r")
        D, v = parse_matrix(write_matrix(D.without("r"), v))
        out = reticulation_pair_normal(D, v)
    else:
        D, _ = parse_matrix(write_matrix(D))
        out = equidistant_normal(D)
    out = parse_network(write_network(*out))
    ok = are_equivalent(net, w, *out)
    print("ok" if ok else "mismatch")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normnet", description="Weighted normal networks from distances.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distances", help="minimum distance matrix of a network")
    p.add_argument("network", help="extended Newick file, or - for stdin")
    p.add_argument("--outgroup", help="also emit the max-distance row from this outgroup")
    p.add_argument("--multiset", action="store_true", help="append all up-down path lengths per pair")
    p.set_defaults(func=_cmd_distances)

    p = sub.add_parser("reconstruct-equidistant", help="equidistant normal network from a matrix")
    p.add_argument("matrix")
    p.set_defaults(func=_cmd_reconstruct_eq)

    p = sub.add_parser("reconstruct-retpair", help="reticulation-pair normal network from matrix + outgroup row")
    p.add_argument("matrix")
    p.set_defaults(func=_cmd_reconstruct_rp)

    def gen_args(p):
        p.add_argument("--leaves", type=int, required=True)
        p.add_argument("--rets", type=int, default=0)
        p.add_argument("--class", dest="cls", choices=["eq", "rp"], required=True)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("generate", help="random weighted normal network")
    gen_args(p)
    p.add_argument("--outgroup", action="store_true", help="hang leaf r off a new root")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("check-equiv", help="exit 0 iff two networks are equivalent")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_check_equiv)

    p = sub.add_parser("roundtrip", help="generate, take distances, reconstruct, compare")
    gen_args(p)
    p.set_defaults(func=_cmd_roundtrip)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotRealizable as exc:
        print(f"normnet: not realisable: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValidationError, NetworkError, InfeasibleSpec, OSError) as exc:
        print(f"normnet: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
