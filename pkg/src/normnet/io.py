"""Text formats: distance-matrix files and extended Newick.

Matrix file::

    3
    x1 x2 x3
    0 4 10
    4 0 6
    10 6 0
    outgroup r
    6 7 6

The first line is the number of taxa, the second their names.  The body is
either the full square or the lower triangle including the diagonal.  An
optional ``outgroup <name>`` section gives the maximum-distance row from that
outgroup, in taxon order.  A ``multiset`` section (written by the CLI) and
anything after it is ignored on input.  ``#`` starts a comment.  Numbers are
integers, exact decimals or ``p/q``.

Extended Newick: a reticulation appears twice, tagged ``#H<k>`` (optionally
after a name); exactly one occurrence carries its subtree.  The branch length
on each occurrence is the weight of the edge from that parent.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .distances import DistanceMatrix, OutgroupMaxVector
from .equivalence import structural_keys
from .errors import ParseError, ValidationError
from .network import Network, Weighting, validate


def format_number(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_number(token: str, line: int | None = None, column: int | None = None) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not an exact number: {token!r}", line, column) from None


# -- matrix files --------------------------------------------------------------


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, body


def _tokens(no: int, body: str):
    return [(m.group(), no, m.start() + 1) for m in re.finditer(r"\S+", body)]


def parse_matrix(text: str) -> tuple[DistanceMatrix, OutgroupMaxVector | None]:
    lines = list(_content_lines(text))
    if len(lines) < 2:
        raise ParseError("matrix file needs a count line and a taxa line", lines[0][0] if lines else 1, 1)
    no, body = lines[0]
    try:
        n = int(body.strip())
    except ValueError:
        raise ParseError(f"taxa count expected, got {body.strip()!r}", no, 1) from None
    no, body = lines[1]
    taxa = [tok for tok, _, _ in _tokens(no, body)]
    if len(taxa) != n:
        raise ParseError(f"expected {n} taxon names, found {len(taxa)}", no, 1)
    if len(set(taxa)) != n:
        raise ParseError("duplicate taxon names", no, 1)

    rows = []
    rest = lines[2:]
    while rest and len(rows) < n:
        no, body = rest.pop(0)
        toks = _tokens(no, body)
        rows.append([parse_number(t, l, c) for t, l, c in toks])
        if len(rows) == 1 and not (len(toks) in (1, n)):
            raise ParseError(f"row 1 has {len(toks)} entries; expected 1 (lower triangle) or {n}", no, 1)
    if len(rows) < n:
        raise ParseError(f"expected {n} matrix rows, found {len(rows)}", lines[-1][0], 1)
    triangular = n > 1 and len(rows[0]) == 1
    full = [[Fraction(0)] * n for _ in range(n)]
    for i, row in enumerate(rows):
        want = i + 1 if triangular else n
        if len(row) != want:
            raise ParseError(f"row {i + 1} has {len(row)} entries, expected {want}", lines[2 + i][0], 1)
        for j, x in enumerate(row):
            full[i][j] = x
            if triangular:
                full[j][i] = x
    D = DistanceMatrix.from_rows(taxa, full)
    problems = D.problems()
    if problems:
        raise ValidationError(problems)

    v = None
    while rest:
        no, body = rest.pop(0)
        toks = _tokens(no, body)
        head = toks[0][0]
        if head == "multiset":
            break
        if head != "outgroup" or v is not None:
            raise ParseError(f"unexpected content {head!r}", no, toks[0][2])
        if len(toks) != 2:
            raise ParseError("expected 'outgroup <name>'", no, 1)
        r = toks[1][0]
        if r in taxa:
            raise ParseError(f"outgroup {r!r} must not be one of the matrix taxa", no, toks[1][2])
        if not rest:
            raise ParseError("outgroup section needs a distance row", no, 1)
        no, body = rest.pop(0)
        vals = [parse_number(t, l, c) for t, l, c in _tokens(no, body)]
        if len(vals) != n:
            raise ParseError(f"outgroup row has {len(vals)} entries, expected {n}", no, 1)
        if any(x <= 0 for x in vals):
            raise ValidationError(["outgroup distances must be positive"])
        v = OutgroupMaxVector.from_dict(r, dict(zip(taxa, vals)), taxa)
    return D, v


def write_matrix(D: DistanceMatrix, v: OutgroupMaxVector | None = None) -> str:
    out = [str(len(D)), " ".join(D.taxa)]
    for row in D.to_rows():
        out.append(" ".join(format_number(x) for x in row))
    if v is not None:
        out.append(f"outgroup {v.outgroup}")
        out.append(" ".join(format_number(v[x]) for x in D.taxa))
    return "\n".join(out) + "\n"


# -- extended Newick ----------------------------------------------------------

_NAME = re.compile(r"[^\s(),:;]+")
_HYBRID = re.compile(r"^(.*)#H(\d+)$")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.edges: list[tuple[int, int, Fraction | None, int, int]] = []
        self.labels: dict[int, str] = {}
        self.hybrids: dict[str, list[tuple[int, bool, int, int]]] = {}
        self.next_id = 0

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, msg: str, pos: int | None = None):
        raise ParseError(msg, *self.where(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.fail(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def vertex(self) -> int:
        v = self.next_id
        self.next_id += 1
        return v

    def subtree(self) -> tuple[int, Fraction | None, int]:
        """Parse one subtree; returns (vertex, branch length, start position)."""
        start = self.pos
        v = self.vertex()
        kids = []
        if self.peek() == "(":
            self.pos += 1
            kids.append(self.subtree())
            while self.peek() == ",":
                self.pos += 1
                kids.append(self.subtree())
            self.expect(")")
        self.skip()
        name_pos = self.pos
        m = _NAME.match(self.text, self.pos)
        name = ""
        if m:
            name = m.group()
            self.pos = m.end()
        length = None
        if self.peek() == ":":
            self.pos += 1
            self.skip()
            m = _NAME.match(self.text, self.pos)
            if not m:
                self.fail("branch length expected after ':'")
            length = parse_number(m.group(), *self.where())
            self.pos = m.end()
        h = _HYBRID.match(name)
        if h:
            self.hybrids.setdefault(h.group(2), []).append((v, bool(kids), *self.where(name_pos)))
            name = h.group(1)
        if not kids:
            if not name and not h:
                self.fail("leaf without a name", name_pos)
            if name and not h:
                self.labels[v] = name
        for child, clen, cpos in kids:
            self.edges.append((v, child, clen, *self.where(cpos)))
        return v, length, start

    def parse(self):
        root, _, _ = self.subtree()
        self.expect(";")
        if self.peek():
            self.fail("trailing content after ';'")
        return root


def parse_network(text: str) -> tuple[Network, dict]:
    p = _Parser(text)
    p.parse()
    merge: dict[int, int] = {}
    for tag, occ in sorted(p.hybrids.items()):
        with_content = [o for o in occ if o[1]]
        if len(occ) != 2 or len(with_content) != 1:
            line, col = occ[-1][2], occ[-1][3]
            raise ParseError(
                f"hybrid #H{tag} must occur exactly twice with one subtree (found {len(occ)} occurrence(s), "
                f"{len(with_content)} with a subtree)",
                line,
                col,
            )
        keep = with_content[0][0]
        (other,) = [o[0] for o in occ if o[0] != keep]
        merge[other] = keep
        for v, _, _, _ in occ:
            p.labels.pop(v, None)
    edges = []
    w: dict[tuple[int, int], Fraction] = {}
    for u, v, length, line, col in p.edges:
        v = merge.get(v, v)
        if length is None:
            raise ParseError("missing branch length", line, col)
        if (u, v) in w:
            raise ValidationError([f"parallel edge {(u, v)}"])
        edges.append((u, v))
        w[(u, v)] = length
    vertices = set(range(p.next_id)) - set(merge)
    net = Network(edges, p.labels, vertices=vertices)
    problems = validate(net, w)
    if problems:
        raise ValidationError(problems)
    return net, w


def write_network(net: Network, w: Weighting) -> str:
    """Deterministic extended Newick; children ordered by structural key."""
    keys = structural_keys(net)
    tags: dict[int, int] = {}

    def rec(v: int) -> str:
        if net.is_reticulation(v):
            if v in tags:
                return f"#H{tags[v]}"
            tags[v] = len(tags) + 1
        kids = sorted(net.children(v), key=keys.__getitem__)
        inner = ",".join(f"{rec(c)}:{format_number(w[(v, c)])}" for c in kids)
        name = net.label(v) or ""
        if net.is_reticulation(v):
            name += f"#H{tags[v]}"
        return f"({inner}){name}" if kids else name

    return rec(net.root) + ";"
