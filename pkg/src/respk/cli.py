"""``respk`` command line.

Exit codes: 0 pass or witness, 1 internal error or unsupported input,
2 conjugate inputs, 3 cap exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import certificate as certs
from .amalgam import parse_surface_word, surface_amalgam, surface_separation_pipeline
from .config import ConfigError, load_config
from .errors import CapExceeded, NormalizationFailed, PreconditionError
from .lab import (
    an_filtration_checks,
    aut_group,
    bn_filtration_checks,
    check_commutator_containment,
    graded_bracket_check,
    group_by_name,
    inn_subgroup,
    ip_kernel,
    lower_p_series,
    quotients_are_p_groups,
)
from .magnus import order_exact_witness, residual_p_witness
from .separation import Conjugator, double_coset_witness, separate_conjugacy_free
from .words import Alphabet, WordSyntaxError, surface_alphabet

EXIT_OK, EXIT_ERROR, EXIT_CONJUGATE, EXIT_CAP, EXIT_FAIL = 0, 1, 2, 3, 4


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, help="prime")
    common.add_argument("--enum-cap", type=int)
    common.add_argument("--trunc-cap", type=int)
    common.add_argument("--depth-cap", type=int)
    common.add_argument("--seed", type=int)
    return common


def _pair_parser(sub, name: str, parents, help_text: str) -> argparse.ArgumentParser:
    """Subcommand taking ``-g`` and ``-h``; help moves to ``--help`` only."""
    sp = sub.add_parser(name, parents=parents, help=help_text, add_help=False)
    sp.add_argument("--help", action="help", help="show this help message and exit")
    sp.add_argument("-g", required=True)
    sp.add_argument("-h", "--h", dest="h", required=True)
    return sp


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="respk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    free = sub.add_parser("free", help="free groups").add_subparsers(dest="action", required=True)
    sep = _pair_parser(free, "separate", [common], "separate two conjugacy classes")
    sep.add_argument("--generators", help="comma-separated generator names (default x,y,z or x1..)")
    sep.add_argument("-o", "--output")
    res = free.add_parser("residual", parents=[common], help="map keeping g nontrivial")
    res.add_argument("-g", required=True)
    res.add_argument("--generators")
    ordw = free.add_parser("order-witness", parents=[common], help="map with image of g of order p^e")
    ordw.add_argument("-g", required=True)
    ordw.add_argument("-e", type=int, required=True)
    ordw.add_argument("--generators")
    dc = _pair_parser(free, "double-coset", [common], "separate gamma^a g from h gamma^b")
    dc.add_argument("-n", type=int, required=True, help="number of commutators in gamma")
    dc.add_argument("-o", "--output")

    surf = sub.add_parser("surface", help="surface groups").add_subparsers(dest="action", required=True)
    ss = _pair_parser(surf, "separate", [common], "separate in an amalgam of finite p-groups")
    sc = _pair_parser(surf, "conjugate", [common], "decide conjugacy")
    for sp in (ss, sc):
        sp.add_argument("--genus", type=int, required=True)
    ss.add_argument("-o", "--output")

    lab = sub.add_parser("lab", help="filtration checks on small groups")
    lab.add_argument("what", choices=["series", "aut", "claims"])
    lab.add_argument("--group", required=True, help="C<n>, D<2m>, Q8, S<n>, E<p>^<r>, products with x")
    lab.add_argument("-p", type=int)
    lab.add_argument("--depth", type=int, default=3)

    ver = sub.add_parser("verify", help="check certificates")
    ver.add_argument("file", nargs="?")
    ver.add_argument("--all", metavar="DIR")
    ver.add_argument("--enum-cap", type=int)
    return parser


def _config(args):
    return load_config(
        p=getattr(args, "p", None),
        enum_cap=getattr(args, "enum_cap", None),
        trunc_cap=getattr(args, "trunc_cap", None),
        depth_cap=getattr(args, "depth_cap", None),
        seed=getattr(args, "seed", None),
    )


def _alphabet(spec: str | None, *texts: str) -> Alphabet:
    if spec:
        return Alphabet(tuple(s.strip() for s in spec.split(",")))
    for rank in (1, 2, 3):
        A = Alphabet.standard(rank)
        try:
            for t in texts:
                A.parse(t)
            return A
        except WordSyntaxError:
            continue
    names = set()
    for t in texts:
        for tok in t.split("*"):
            names.add(tok.strip().split("^")[0])
    names.discard("1")
    rank = max((int(n[1:]) for n in names if n[1:].isdigit()), default=1)
    return Alphabet.standard(max(rank, 4))


def _write(cert, output: str | None) -> None:
    text = certs.emit(cert)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        print(f"certificate: {output}")
    else:
        sys.stdout.write(text)


def _hom_lines(phi) -> None:
    G = phi.target
    print(f"target: {G.format()}")
    for name, img in zip(phi.alphabet.names, phi.images):
        print(f"image {name}: {G.format_elem(img)}")


def _free(args, cfg) -> int:
    if args.action == "double-coset":
        A = surface_alphabet(args.n)
        g, h = A.parse(args.g), A.parse(args.h)
        w = double_coset_witness(g, h, args.n, cfg.p, A, cfg.trunc_cap)
        _write(certs.from_double_coset(w, cfg.p, args.n), args.output)
        return EXIT_OK
    texts = [args.g] + ([args.h] if args.action == "separate" else [])
    A = _alphabet(args.generators, *texts)
    g = A.parse(args.g)
    if args.action == "residual":
        _hom_lines(residual_p_witness(g, cfg.p, A, cfg.trunc_cap))
        return EXIT_OK
    if args.action == "order-witness":
        _hom_lines(order_exact_witness(g, args.e, cfg.p, A, cfg.trunc_cap))
        return EXIT_OK
    h = A.parse(args.h)
    out = separate_conjugacy_free(g, h, cfg.p, A, cap=cfg.enum_cap, depth_cap=cfg.depth_cap, trunc_cap=cfg.trunc_cap)
    if isinstance(out, Conjugator):
        print(f"conjugate: f = {A.format(out.f)} with f*h*f^-1 = g")
        return EXIT_CONJUGATE
    _write(certs.from_free_witness(out, cfg.p, cfg.enum_cap), args.output)
    return EXIT_OK


def _surface(args, cfg) -> int:
    A = surface_amalgam(args.genus)
    g, h = parse_surface_word(A, args.g), parse_surface_word(A, args.h)
    if args.action == "conjugate":
        f = A.is_conjugate(g, h)
        if f is None:
            print("conjugate: no")
            return EXIT_OK
        print(f"conjugate: yes\nconjugator: {f.format()}")
        return EXIT_CONJUGATE
    out = surface_separation_pipeline(A, g, h, cfg.p, cfg.normalizations, cfg.normalization_depth,
                                      cfg.enum_cap, cfg.trunc_cap)
    if not hasattr(out, "hom"):
        print(f"conjugate: f = {out.format()} with f*h*f^-1 = g")
        return EXIT_CONJUGATE
    _write(certs.from_surface_witness(out, cfg.p, args.genus, cfg.enum_cap), args.output)
    return EXIT_OK


def _lab(args) -> int:
    p = args.p or load_config().p
    G = group_by_name(args.group)
    print(f"group: {G.name}\norder: {G.order}\np: {p}")
    if args.what == "series":
        chain = lower_p_series(G, p)
        print("series_orders: " + ",".join(str(len(c)) for c in chain))
        print(f"reaches_trivial: {str(len(chain[-1]) == 1).lower()}")
        print(f"quotients_p_groups: {str(quotients_are_p_groups(G, p)).lower()}")
        print(f"commutator_containment: {str(check_commutator_containment(G, p, args.depth + 1)).lower()}")
        print(f"graded_bracket: {str(graded_bracket_check(G, p)).lower()}")
        return EXIT_OK
    if args.what == "aut":
        print(f"aut_order: {len(aut_group(G))}")
        print(f"inn_order: {len(inn_subgroup(G))}")
        print(f"ip_order: {len(ip_kernel(G, p))}")
        return EXIT_OK
    ok = True
    for rep in (an_filtration_checks(G, p, args.depth), bn_filtration_checks(G, p, args.depth)):
        for line in rep.lines()[2:]:
            print(line)
        ok &= rep.ok
    return EXIT_OK if ok else EXIT_FAIL


def _verify_one(path: Path, cap: int | None) -> int:
    try:
        cert = certs.parse(path.read_text(encoding="utf-8"))
    except certs.CertificateSyntaxError as exc:
        print(f"{path}: fail: {exc}")
        return EXIT_FAIL
    rep = certs.verify(cert, cap)
    for msg in rep.messages:
        print(f"{path}: {rep.status}: {msg}")
    return {"pass": EXIT_OK, "cap-exceeded": EXIT_CAP}.get(rep.status, EXIT_FAIL)


def _verify(args) -> int:
    if bool(args.file) == bool(args.all):
        print("give exactly one of FILE or --all DIR", file=sys.stderr)
        return EXIT_ERROR
    paths = [Path(args.file)] if args.file else sorted(Path(args.all).glob("*.cert"))
    codes = [_verify_one(p, args.enum_cap) for p in paths]
    return max(codes, default=EXIT_OK)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "lab":
            return _lab(args)
        if args.command == "verify":
            return _verify(args)
        cfg = _config(args)
        if args.command == "free":
            return _free(args, cfg)
        return _surface(args, cfg)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NormalizationFailed as exc:
        print(f"normalization failed: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (PreconditionError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if os.environ.get("RESPK_DEBUG"):
            raise
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
