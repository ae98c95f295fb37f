"""Line-oriented certificates and their independent verifier.

A certificate records a homomorphism onto a finite p-group by generator
images only.  The verifier recomputes every image from those, compares with
the recorded values, and reruns the recorded check.  It relies on group
arithmetic, rewriting and amalgam normal forms, never on the code that built
the witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .amalgam import AmalgamHom, parse_surface_word, surface_amalgam, verify_surface_witness
from .errors import CapExceeded
from .pgroups import Cyclic, DEFAULT_ENUM_CAP, PHom, conjugacy_search, direct_combine, induced_wreath, parse_group
from .schreier import ExponentHom, rewrite_in_Y, schreier_generators
from .words import Alphabet, gamma

__all__ = [
    "FORMAT_VERSION",
    "HomBlock",
    "CertNode",
    "Certificate",
    "CertificateSyntaxError",
    "VerificationFailure",
    "VerifyReport",
    "emit",
    "parse",
    "verify",
    "from_free_witness",
    "from_double_coset",
    "from_surface_witness",
]

FORMAT_VERSION = 1
MAGIC = f"respk-certificate {FORMAT_VERSION}"


class CertificateSyntaxError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class VerificationFailure(Exception):
    pass


@dataclass(frozen=True)
class HomBlock:
    """Generator names, target group expression and one image literal per generator."""

    alphabet: tuple[str, ...]
    target: str
    images: tuple[str, ...]


@dataclass(frozen=True)
class CertNode:
    hom: HomBlock
    g: str
    h: str
    step: str
    image_g: str
    image_h: str
    verification: str
    swapped: bool = False
    mu: tuple[int, ...] = ()
    designated: int = 0
    i0: int = 0
    children: tuple["CertNode", ...] = ()


@dataclass(frozen=True)
class Certificate:
    p: int
    mode: str
    tool: str
    inputs: tuple[tuple[str, str], ...]
    verification: str
    cap: int
    outcome: str
    node: CertNode | None = None
    homs: tuple[HomBlock, ...] = ()
    record: tuple[tuple[str, str], ...] = ()

    def input(self, key: str) -> str:
        return dict(self.inputs)[key]

    def recorded(self, key: str) -> str:
        return dict(self.record)[key]


# -- building --------------------------------------------------------------------------


def _tool() -> str:
    from . import __version__

    return f"respk {__version__}"


def _hom_block(phi: PHom) -> HomBlock:
    G = phi.target
    return HomBlock(phi.alphabet.names, G.format(), tuple(G.format_elem(a) for a in phi.images))


def _node(node) -> CertNode:
    A, G, phi = node.alphabet, node.hom.target, node.hom
    children = ()
    if node.step == "lift" and node.verification == "compositional":
        children = tuple(_node(c) for c in node.children)
    mu = node.mu
    return CertNode(
        _hom_block(phi), A.format(node.g), A.format(node.h), node.step,
        G.format_elem(phi(node.g)), G.format_elem(phi(node.h)), node.verification or "none",
        node.swapped, mu.values if mu else (), mu.designated if mu else 0,
        node.i0 or 0, children,
    )


def from_free_witness(w, p: int, cap: int = DEFAULT_ENUM_CAP) -> Certificate:
    node = _node(w.node)
    inputs = (("alphabet", ",".join(w.node.alphabet.names)), ("g", node.g), ("h", node.h))
    return Certificate(p, "free-separation", _tool(), inputs, w.mode, cap, "pass", node=node)


def from_double_coset(w, p: int, n: int) -> Certificate:
    A = w.hom.alphabet
    inputs = (("n", str(n)), ("g", A.format(w.g)), ("h", A.format(w.h)))
    return Certificate(p, "double-coset", _tool(), inputs, "table", DEFAULT_ENUM_CAP, "pass",
                       homs=(_hom_block(w.hom),), record=(("modulus", str(w.modulus)),))


def from_surface_witness(w, p: int, genus: int, cap: int = DEFAULT_ENUM_CAP) -> Certificate:
    inputs = (("genus", str(genus)), ("g", w.g.format()), ("h", w.h.format()))
    record = (("step", w.step), ("cases", ",".join(w.cases) or "none"), ("table", str(w.table_size)))
    return Certificate(p, "surface-separation", _tool(), inputs, "table", cap, "pass",
                       homs=tuple(_hom_block(f) for f in w.hom.homs), record=record)


# -- text form -----------------------------------------------------------------------------


def _emit_hom(b: HomBlock, out: list[str], pad: str) -> None:
    out.append(f"{pad}alphabet: {','.join(b.alphabet)}")
    out.append(f"{pad}target: {b.target}")
    for name, img in zip(b.alphabet, b.images):
        out.append(f"{pad}image {name}: {img}")


def _emit_node(n: CertNode, out: list[str], depth: int) -> None:
    pad = "  " * depth
    out.append(f"{pad}begin node")
    inner = pad + "  "
    out.append(f"{inner}g: {n.g}")
    out.append(f"{inner}h: {n.h}")
    out.append(f"{inner}step: {n.step}")
    _emit_hom(n.hom, out, inner)
    out.append(f"{inner}image-g: {n.image_g}")
    out.append(f"{inner}image-h: {n.image_h}")
    out.append(f"{inner}verification: {n.verification}")
    if n.step == "lift":
        out.append(f"{inner}swapped: {str(n.swapped).lower()}")
        out.append(f"{inner}mu: {','.join(map(str, n.mu))}")
        out.append(f"{inner}designated: {n.designated}")
        out.append(f"{inner}i0: {n.i0}")
    for c in n.children:
        _emit_node(c, out, depth + 1)
    out.append(f"{pad}end node")


def emit(cert: Certificate) -> str:
    out = [MAGIC, f"tool: {cert.tool}", f"p: {cert.p}", f"mode: {cert.mode}"]
    out += [f"input {k}: {v}" for k, v in cert.inputs]
    if cert.node is not None:
        _emit_node(cert.node, out, 0)
    for i, b in enumerate(cert.homs, 1):
        out.append(f"begin hom {i}")
        _emit_hom(b, out, "  ")
        out.append("end hom")
    out += [f"record {k}: {v}" for k, v in cert.record]
    out += [f"verification: {cert.verification}", f"cap: {cert.cap}", f"outcome: {cert.outcome}"]
    return "\n".join(out) + "\n"


class _Lines:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    @property
    def lineno(self) -> int:
        return self.pos + 1

    def peek(self) -> str | None:
        while self.pos < len(self.lines) and not self.lines[self.pos].strip():
            self.pos += 1
        return self.lines[self.pos].strip() if self.pos < len(self.lines) else None

    def take(self) -> str:
        line = self.peek()
        if line is None:
            raise CertificateSyntaxError(self.lineno, "unexpected end of file")
        self.pos += 1
        return line

    def field(self, key: str) -> str:
        line = self.take()
        head, sep, val = line.partition(": ")
        if not sep and line.endswith(":"):
            head, sep, val = line[:-1], ":", ""
        if head != key:
            raise CertificateSyntaxError(self.pos, f"expected '{key}:', found {line!r}")
        return val

    def error(self, message: str) -> CertificateSyntaxError:
        return CertificateSyntaxError(self.pos, message)


def _int(lines: _Lines, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise lines.error(f"expected an integer, found {text!r}") from None


def _parse_hom(lines: _Lines) -> HomBlock:
    names = tuple(s for s in lines.field("alphabet").split(",") if s)
    target = lines.field("target")
    images = tuple(lines.field(f"image {nm}") for nm in names)
    return HomBlock(names, target, images)


def _parse_node(lines: _Lines) -> CertNode:
    if lines.take() != "begin node":
        raise lines.error("expected 'begin node'")
    g, h, step = lines.field("g"), lines.field("h"), lines.field("step")
    hom = _parse_hom(lines)
    ig, ih, ver = lines.field("image-g"), lines.field("image-h"), lines.field("verification")
    kw = {}
    if step == "lift":
        sw = lines.field("swapped")
        if sw not in ("true", "false"):
            raise lines.error("swapped must be true or false")
        kw["swapped"] = sw == "true"
        kw["mu"] = tuple(_int(lines, s) for s in lines.field("mu").split(",") if s)
        kw["designated"] = _int(lines, lines.field("designated"))
        kw["i0"] = _int(lines, lines.field("i0"))
    children = []
    while lines.peek() == "begin node":
        children.append(_parse_node(lines))
    if lines.take() != "end node":
        raise lines.error("expected 'end node'")
    return CertNode(hom, g, h, step, ig, ih, ver, children=tuple(children), **kw)


def parse(text: str) -> Certificate:
    lines = _Lines(text)
    if lines.peek() != MAGIC:
        raise CertificateSyntaxError(lines.lineno, f"expected header {MAGIC!r}")
    lines.take()
    tool = lines.field("tool")
    p = _int(lines, lines.field("p"))
    mode = lines.field("mode")
    if mode not in ("free-separation", "double-coset", "surface-separation"):
        raise lines.error(f"unknown mode {mode!r}")
    inputs, record, homs = [], [], []
    node = None
    while (nxt := lines.peek()) is not None and nxt.startswith("input "):
        key, _, val = lines.take()[6:].partition(": ")
        inputs.append((key, val))
    if lines.peek() == "begin node":
        node = _parse_node(lines)
    while (nxt := lines.peek()) is not None and nxt.startswith("begin hom"):
        lines.take()
        homs.append(_parse_hom(lines))
        if lines.take() != "end hom":
            raise lines.error("expected 'end hom'")
    while (nxt := lines.peek()) is not None and nxt.startswith("record "):
        key, _, val = lines.take()[7:].partition(": ")
        record.append((key, val))
    ver = lines.field("verification")
    cap = _int(lines, lines.field("cap"))
    outcome = lines.field("outcome")
    if lines.peek() is not None:
        raise CertificateSyntaxError(lines.lineno, "trailing content")
    return Certificate(p, mode, tool, tuple(inputs), ver, cap, outcome, node, tuple(homs), tuple(record))


# -- verification ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    status: str  # pass | fail | cap-exceeded
    messages: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _build_hom(b: HomBlock, p: int, where: str) -> PHom:
    try:
        G = parse_group(b.target, p)
    except ValueError as exc:
        raise VerificationFailure(f"{where}: bad target {b.target!r}: {exc}") from None
    images = []
    for name, lit in zip(b.alphabet, b.images):
        try:
            a = G.parse_elem(lit)
            G.check(a)
        except (ValueError, TypeError) as exc:
            raise VerificationFailure(f"{where}: image of {name} is not an element of {b.target}: {exc}") from None
        images.append(a)
    return PHom(Alphabet(b.alphabet), G, images)


def _check_node(n: CertNode, p: int, cap: int, where: str) -> None:
    phi = _build_hom(n.hom, p, where)
    A, G = phi.alphabet, phi.target
    g, h = A.parse(n.g), A.parse(n.h)
    a, b = phi(g), phi(h)
    for label, val, rec in (("g", a, n.image_g), ("h", b, n.image_h)):
        if G.format_elem(val) != rec:
            raise VerificationFailure(f"{where}: image of {label} recorded {rec} but recomputed {G.format_elem(val)}")
    if n.verification == "full-enumeration":
        conj, _ = conjugacy_search(G, phi.images, a, b, cap)
        if conj is not None:
            raise VerificationFailure(f"{where}: images are conjugate via {G.format_elem(conj)}")
        return
    if n.verification != "compositional":
        raise VerificationFailure(f"{where}: unknown verification mode {n.verification!r}")
    if n.step == "trivial":
        if G.is_identity(a) == G.is_identity(b):
            raise VerificationFailure(f"{where}: exactly one image must be the identity")
    elif n.step in ("powers", "homology"):
        if not isinstance(G, Cyclic):
            raise VerificationFailure(f"{where}: abelian step needs a cyclic target")
        if a == b:
            raise VerificationFailure(f"{where}: images coincide in an abelian target")
    elif n.step == "lift":
        _check_lift(n, phi, g, h, p, cap, where)
    else:
        raise VerificationFailure(f"{where}: unknown step {n.step!r}")


def _check_lift(n: CertNode, phi: PHom, g, h, p: int, cap: int, where: str) -> None:
    A = phi.alphabet
    g, _ = g.cyclic_reduce()
    h, _ = h.cyclic_reduce()
    if n.swapped:
        g, h = h, g
    try:
        mu = ExponentHom(n.mu, n.designated, p)
    except (ValueError, IndexError) as exc:
        raise VerificationFailure(f"{where}: bad exponent map: {exc}") from None
    if mu.rank != A.rank or mu(g) or mu(h) or n.designated not in g.support():
        raise VerificationFailure(f"{where}: exponent map is not admissible")
    sb = schreier_generators(mu, A)
    if len(n.children) != p:
        raise VerificationFailure(f"{where}: expected {p} subproblems, found {len(n.children)}")
    gi0 = rewrite_in_Y(g, n.i0, sb)
    if len(gi0) >= len(g):
        raise VerificationFailure(f"{where}: residue {n.i0} does not shorten g")
    homs = []
    for i, c in enumerate(n.children):
        cw = f"{where}.{i}"
        if c.hom.alphabet != sb.alphabet.names:
            raise VerificationFailure(f"{cw}: alphabet differs from the Schreier basis")
        if c.g != sb.alphabet.format(gi0) or c.h != sb.alphabet.format(rewrite_in_Y(h, i, sb)):
            raise VerificationFailure(f"{cw}: subproblem does not match the rewriting")
        _check_node(c, p, cap, cw)
        homs.append(_build_hom(c.hom, p, cw))
    beta = direct_combine(*homs)
    expect = induced_wreath(mu, lambda w: beta(rewrite_in_Y(w, 0, sb)), beta.target, A)
    T = expect.target
    if T.format() != n.hom.target:
        raise VerificationFailure(f"{where}: target recorded {n.hom.target} but recomputed {T.format()}")
    for name, img, rec in zip(A.names, expect.images, n.hom.images):
        if T.format_elem(img) != rec:
            raise VerificationFailure(f"{where}: image of {name} recorded {rec} but recomputed {T.format_elem(img)}")


def _check_double_coset(cert: Certificate) -> None:
    n = int(cert.input("n"))
    phi = _build_hom(cert.homs[0], cert.p, "hom")
    A, G = phi.alphabet, phi.target
    g, h, gw = A.parse(cert.input("g")), A.parse(cert.input("h")), gamma(n)
    c = phi(gw)
    N = G.elem_order(c)
    if str(N) != cert.recorded("modulus"):
        raise VerificationFailure(f"modulus recorded {cert.recorded('modulus')} but recomputed {N}")
    pg, ph = phi(g), phi(h)
    left, right = {}, {}
    cur = G.identity()
    for t in range(N):
        left[G.mul(cur, pg)] = t
        right[G.mul(ph, cur)] = t
        cur = G.mul(cur, c)
    for x, a in left.items():
        if x in right:
            raise VerificationFailure(f"gamma^{a} g = h gamma^{right[x]} holds in the image")


def _check_surface(cert: Certificate) -> None:
    A = surface_amalgam(int(cert.input("genus")))
    g = parse_surface_word(A, cert.input("g"))
    h = parse_surface_word(A, cert.input("h"))
    if len(cert.homs) != 2:
        raise VerificationFailure("surface certificate needs two factor maps")
    phis = [_build_hom(b, cert.p, f"hom {i + 1}") for i, b in enumerate(cert.homs)]
    for i, (F, phi) in enumerate(zip(A.factors, phis)):
        if phi.alphabet != F.alphabet:
            raise VerificationFailure(f"hom {i + 1}: alphabet does not match the surface factor")
    orders = [phi.target.elem_order(phi(F.gamma)) for F, phi in zip(A.factors, phis)]
    if orders[0] != orders[1]:
        raise VerificationFailure(f"gamma images have orders {orders[0]} and {orders[1]}")
    hom = AmalgamHom.build(A, phis[0], phis[1], cert.cap)
    try:
        table = verify_surface_witness(hom, g, h)
    except AssertionError as exc:
        raise VerificationFailure(str(exc)) from None
    if str(table) != cert.recorded("table"):
        raise VerificationFailure(f"table size recorded {cert.recorded('table')} but recomputed {table}")


def verify(cert: Certificate, cap: int | None = None) -> VerifyReport:
    """Rerun the recorded check; ``cap-exceeded`` is reported separately from ``fail``."""
    cap = cap or cert.cap
    try:
        if cert.outcome != "pass":
            raise VerificationFailure(f"certificate records outcome {cert.outcome!r}")
        if cert.mode == "free-separation":
            if cert.node is None:
                raise VerificationFailure("missing node block")
            _check_node(cert.node, cert.p, cap, "root")
            if cert.node.verification != cert.verification:
                raise VerificationFailure("root verification mode differs from the header")
        elif cert.mode == "double-coset":
            _check_double_coset(cert)
        else:
            _check_surface(cert)
    except CapExceeded as exc:
        return VerifyReport("cap-exceeded", [str(exc)])
    except VerificationFailure as exc:
        return VerifyReport("fail", [str(exc)])
    except (KeyError, ValueError, IndexError) as exc:
        return VerifyReport("fail", [f"malformed data: {exc}"])
    return VerifyReport("pass", [f"{cert.mode}: {cert.verification} check passed"])
