"""Command-line entry point: ``quantsel <command> [options]``.

Exit codes: 0 success or verified, 2 nothing found, 3 verification failed,
4 invalid input.
"""
import argparse
import sys
from fractions import Fraction

from ..errors import InvalidInput, NotFound, QuantselError, Unsupported
from . import certify
from .generate import GENERATORS, generate
from .io import load_certificate, load_instance, write_json
from .render import render_svg
from .verify import verify

OK, NOT_FOUND, VERIFY_FAILED, INVALID = 0, 2, 3, 4


def _rational(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="quantsel", description="Certified volumetric selection and Tverberg tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help, needs_in=True, needs_out=True):
        p = sub.add_parser(name, help=help)
        if needs_in:
            p.add_argument("--in", dest="inp", required=True, help="instance JSON")
        if needs_out:
            p.add_argument("--out", required=True, help="output file")
        p.add_argument("--seed", type=int, default=0)
        return p

    g = cmd("gen", "generate an instance", needs_in=False)
    g.add_argument("--kind", required=True, choices=sorted(GENERATORS))
    g.add_argument("--d", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--eps", type=_rational)
    g.add_argument("--families", type=int)
    g.add_argument("--per", type=int)
    g.add_argument("--window", type=int)
    g.add_argument("--spread", type=int, help="offset between families of randomSquares")

    cmd("john", "John ellipsoid of every body")
    s = cmd("select", "selection witness")
    s.add_argument("--variant", default="simplex", choices=["quadratic", "steinitz", "simplex"])
    s.add_argument("--mode", default="volume", choices=["volume", "diameter"])
    s.add_argument("--samples", type=int, default=2000)
    e = cmd("epsnet", "greedy volumetric weak epsilon-net")
    e.add_argument("--eps", type=_rational, required=True)
    e.add_argument("--variant", default="simplex", choices=["quadratic", "steinitz", "simplex"])
    t = cmd("tverberg", "ellipsoid Tverberg partition (colorful for colorFamilies instances)")
    t.add_argument("--r", type=int, required=True)
    t = cmd("tverberg-diam", "colorful Tverberg for segments")
    t.add_argument("--r", type=int, default=2)
    t = cmd("sametype", "same-type refinement")
    t.add_argument("--alpha", type=_rational, default=Fraction(1, 3))
    h = cmd("homsel", "brute-force homogeneous selection")
    h.add_argument("--target", type=_rational, default=Fraction(1, 2), help="subfamily fraction")
    v = cmd("verify", "re-check a certificate", needs_out=False)
    v.add_argument("--cert", required=True)
    r = cmd("render", "SVG drawing of a planar instance")
    r.add_argument("--cert")
    return ap


def run(args):
    if args.command == "gen":
        params = {k: getattr(args, k) for k in ("d", "n", "eps", "families", "per", "window", "spread")
                  if getattr(args, k) is not None}
        write_json(args.out, generate(args.kind, seed=args.seed, **params).to_json())
        return OK
    inst = load_instance(args.inp)
    if args.command == "verify":
        verdict = verify(inst, load_certificate(args.cert))
        for msg in verdict.failures:
            print(f"FAIL: {msg}", file=sys.stderr)
        print("verified" if verdict else "rejected")
        return OK if verdict else VERIFY_FAILED
    if args.command == "render":
        render_svg(inst, load_certificate(args.cert) if args.cert else None, args.out)
        return OK
    if args.command == "john":
        cert = certify.john(inst)
    elif args.command == "select":
        cert = certify.selection(inst, args.variant, args.mode, args.seed, args.samples)
    elif args.command == "epsnet":
        cert = certify.epsnet(inst, args.eps, args.variant, args.seed)
    elif args.command == "tverberg":
        cert = certify.tverberg(inst, args.r, args.seed)
    elif args.command == "tverberg-diam":
        cert = certify.tverberg_diameter(inst, args.r, args.seed)
    elif args.command == "sametype":
        cert = certify.sametype(inst, args.alpha)
    else:
        cert = certify.homogeneous(inst, args.target)
    write_json(args.out, cert.to_json())
    return OK


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    try:
        return run(args)
    except NotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return NOT_FOUND
    except (InvalidInput, Unsupported, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return INVALID
    except QuantselError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return NOT_FOUND


if __name__ == "__main__":
    sys.exit(main())
