"""Quandles, racks, and partial quandles/racks carrying a binary relation.

A PartialAlgebra holds an ordered element list, partial * and bar-*
tables, a relation on the same elements, and a claimed kind.  Axiom
checking is exhaustive over the licensed pairs/triples and reports
every violated instance instead of stopping early.

The `.alg` text format has blocks separated by `%` lines: element
names, the * table (`-` for undefined entries), an optional bar table,
and an optional 0/1 relation block (full relation when omitted).  With
three blocks the third is the relation; supplying a bar table requires
all four blocks.  When the bar table is omitted it is synthesized by
inverting each * column, which must be injective on the licensed rows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArgumentError, ParseError, PartialityError, UnknownElementError
from .relation import BinaryRelation, dominance

KINDS = ("rack", "quandle", "partial_rack_rel", "partial_quandle_rel")


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    where: tuple
    detail: str

    def __str__(self):
        return f"{self.axiom} at {self.where}: {self.detail}"


@dataclass(frozen=True)
class AxiomReport:
    kind: str
    checked: tuple
    violations: tuple

    @property
    def passed(self):
        return not self.violations

    def __str__(self):
        head = f"kind={self.kind} axioms={','.join(self.checked)}"
        if self.passed:
            return head + " : pass"
        lines = [head + f" : {len(self.violations)} violation(s)"]
        lines.extend("  " + str(v) for v in self.violations)
        return "\n".join(lines)


class PartialAlgebra:
    """Element set with partial * / bar-* tables and a relation."""

    def __init__(self, elements, star, bar, rel, kind_claim, name=""):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ArgumentError("element names must be distinct")
        if kind_claim not in KINDS:
            raise ArgumentError(f"unknown kind {kind_claim!r}")
        eset = set(self.elements)
        for table, label in ((star, "*"), (bar, "bar*")):
            for (x, y), z in table.items():
                if x not in eset or y not in eset or z not in eset:
                    raise ArgumentError(f"{label} table mentions unknown elements")
        if tuple(rel.elements) != self.elements:
            raise ArgumentError("relation must live on the same ordered element list")
        self.star_table = dict(star)
        self.bar_table = dict(bar)
        self.rel = rel
        self.kind_claim = kind_claim
        self.name = name
        self._preorder = None

    def describe(self):
        return self.name or f"{self.kind_claim}({len(self.elements)} elements)"

    # -- operations -----------------------------------------------------------

    def apply(self, x, y, which="star"):
        """Table lookup; undefined entries raise a partiality error."""
        if x not in self.elements or y not in self.elements:
            raise UnknownElementError(f"unknown element in ({x!r}, {y!r})")
        table = self.star_table if which == "star" else self.bar_table
        if which not in ("star", "bar"):
            raise ArgumentError(f"operation must be 'star' or 'bar', not {which!r}")
        try:
            return table[(x, y)]
        except KeyError:
            raise PartialityError(f"{which}({x!r}, {y!r}) is undefined") from None

    def star_or_none(self, x, y):
        if x is None:
            return None
        return self.star_table.get((x, y))

    def bar_or_none(self, x, y):
        if x is None:
            return None
        return self.bar_table.get((x, y))

    def star_total(self):
        return all((x, y) in self.star_table for x in self.elements for y in self.elements)

    def bar_total(self):
        return all((x, y) in self.bar_table for x in self.elements for y in self.elements)

    def preorder(self):
        if self._preorder is None:
            self._preorder = dominance(self.rel)
        return self._preorder

    def equivalent(self, x, y):
        return self.preorder().equivalent(x, y)

    def licensed_pairs(self):
        return [(x, y) for x in self.elements for y in self.elements if self.rel.relate(x, y)]

    # -- axiom checking ---------------------------------------------------------

    def check_axioms(self):
        """Exhaustively verify the axiom set implied by kind_claim."""
        kind = self.kind_claim
        violations = []
        if kind in ("rack", "quandle"):
            axioms = ("Q2", "Q3") if kind == "rack" else ("Q1", "Q2", "Q3")
            if not self.star_total() or not self.bar_total():
                violations.append(
                    AxiomViolation("totality", (), "rack/quandle tables must be total")
                )
            else:
                if "Q1" in axioms:
                    violations += self._check_q1()
                violations += self._check_q2()
                violations += self._check_q3()
            return AxiomReport(kind, axioms, tuple(violations))

        axioms = (
            ("PQ1", "PQ2", "PQ3", "PQ4", "PQ5")
            if kind == "partial_quandle_rel"
            else ("PQ1", "PQ2", "PQ4", "PQ5")
        )
        violations += self._check_pq1()
        violations += self._check_pq2()
        if "PQ3" in axioms:
            violations += self._check_pq3()
        violations += self._check_pq4()
        violations += self._check_pq5()
        return AxiomReport(kind, axioms, tuple(violations))

    def _check_q1(self):
        out = []
        for x in self.elements:
            if self.star_table.get((x, x)) != x or self.bar_table.get((x, x)) != x:
                out.append(AxiomViolation("Q1", (x,), "x*x = x = x bar* x fails"))
        return out

    def _check_q2(self):
        out = []
        for x in self.elements:
            for y in self.elements:
                sx = self.star_table.get((x, y))
                bx = self.bar_table.get((x, y))
                if sx is None or bx is None:
                    out.append(AxiomViolation("Q2", (x, y), "operation undefined"))
                    continue
                if self.bar_table.get((sx, y)) != x or self.star_table.get((bx, y)) != x:
                    out.append(AxiomViolation("Q2", (x, y), "inverse law fails"))
        return out

    def _check_q3(self):
        out = []
        for x in self.elements:
            for y in self.elements:
                for z in self.elements:
                    lhs = self.star_or_none(self.star_or_none(x, y), z)
                    rhs = self.star_or_none(
                        self.star_or_none(x, z), self.star_or_none(y, z)
                    )
                    if lhs is None or rhs is None or lhs != rhs:
                        out.append(
                            AxiomViolation("Q3", (x, y, z), "right distributivity fails")
                        )
        return out

    def _check_pq1(self):
        out = []
        for x, y in self.licensed_pairs():
            if (x, y) not in self.star_table or (x, y) not in self.bar_table:
                out.append(
                    AxiomViolation("PQ1", (x, y), "related pair lacks * or bar* entry")
                )
        return out

    def _check_pq2(self):
        out = []
        for x, y in self.licensed_pairs():
            for label, table in (("*", self.star_table), ("bar*", self.bar_table)):
                z = table.get((x, y))
                if z is None:
                    continue  # reported by PQ1
                if not self.equivalent(z, x):
                    out.append(
                        AxiomViolation(
                            "PQ2", (x, y), f"x {label} y = {z!r} not equivalent to x"
                        )
                    )
        return out

    def _check_pq3(self):
        out = []
        for x in self.elements:
            if self.rel.relate(x, x):
                if (
                    self.star_table.get((x, x)) != x
                    or self.bar_table.get((x, x)) != x
                ):
                    out.append(AxiomViolation("PQ3", (x,), "x*x = x = x bar* x fails"))
        return out

    def _check_pq4(self):
        out = []
        for x, y in self.licensed_pairs():
            sx = self.star_table.get((x, y))
            bx = self.bar_table.get((x, y))
            if sx is None or bx is None:
                continue  # reported by PQ1
            if self.bar_or_none(sx, y) != x or self.star_or_none(bx, y) != x:
                out.append(AxiomViolation("PQ4", (x, y), "inverse law fails"))
        return out

    def _check_pq5(self):
        out = []
        for x in self.elements:
            for y in self.elements:
                for z in self.elements:
                    if (
                        self.rel.relate(x, y)
                        and self.rel.relate(x, z)
                        and self.rel.relate(y, z)
                    ):
                        lhs = self.star_or_none(self.star_or_none(x, y), z)
                        rhs = self.star_or_none(
                            self.star_or_none(x, z), self.star_or_none(y, z)
                        )
                        if lhs is None or rhs is None or lhs != rhs:
                            out.append(
                                AxiomViolation(
                                    "PQ5", (x, y, z), "right distributivity fails"
                                )
                            )
        return out

    def distributivity_variant(self, variant):
        """Check one of the four bar/star right-distributivity shapes over
        all licensed triples; they are mutually equivalent given PQ1,
        PQ2 and PQ4."""
        ops = {
            1: (self.star_or_none, self.star_or_none, self.star_or_none),
            2: (self.bar_or_none, self.star_or_none, self.bar_or_none),
            3: (self.star_or_none, self.bar_or_none, self.star_or_none),
            4: (self.bar_or_none, self.bar_or_none, self.bar_or_none),
        }
        if variant not in ops:
            raise ArgumentError("variant must be 1..4")
        inner, outer, mixed = ops[variant]
        for x in self.elements:
            for y in self.elements:
                for z in self.elements:
                    if (
                        self.rel.relate(x, y)
                        and self.rel.relate(x, z)
                        and self.rel.relate(y, z)
                    ):
                        lhs = outer(inner(x, y), z)
                        rhs = mixed(outer(x, z), outer(y, z))
                        if lhs != rhs or lhs is None:
                            return False, (x, y, z)
        return True, None


# -- constructions ---------------------------------------------------------------


def dihedral_quandle(n):
    """i * j = i bar* j = 2j - i (mod n) on {0..n-1}."""
    if n < 1:
        raise ArgumentError("n must be at least 1")
    elements = [str(i) for i in range(n)]
    table = {
        (str(i), str(j)): str((2 * j - i) % n) for i in range(n) for j in range(n)
    }
    return PartialAlgebra(
        elements, table, dict(table), BinaryRelation.full(elements), "quandle",
        name=f"dihedral({n})",
    )


def core_quandle(n):
    """Core of the cyclic group: a * b = b a^{-1} b reads 2b - a additively."""
    if n < 1:
        raise ArgumentError("n must be at least 1")
    elements = [str(i) for i in range(n)]
    table = {
        (str(a), str(b)): str((2 * b - a) % n) for a in range(n) for b in range(n)
    }
    return PartialAlgebra(
        elements, table, dict(table), BinaryRelation.full(elements), "quandle",
        name=f"core(cyclic {n})",
    )


def conj_quandle(n, exponent=1):
    """Conjugation a * b = b^-k a b^k; trivial on an abelian carrier."""
    if n < 1:
        raise ArgumentError("n must be at least 1")
    elements = [str(i) for i in range(n)]
    table = {(x, y): x for x in elements for y in elements}
    return PartialAlgebra(
        elements, table, dict(table), BinaryRelation.full(elements), "quandle",
        name=f"conj(cyclic {n}, k={exponent})",
    )


def gset_rack(n, g):
    """G-set rack on the cyclic group: x * y = x + g, x bar* y = x - g."""
    if n < 1:
        raise ArgumentError("n must be at least 1")
    elements = [str(i) for i in range(n)]
    star = {(str(x), y): str((x + g) % n) for x in range(n) for y in elements}
    bar = {(str(x), y): str((x - g) % n) for x in range(n) for y in elements}
    return PartialAlgebra(
        elements, star, bar, BinaryRelation.full(elements), "rack",
        name=f"gset_rack(cyclic {n}, g={g})",
    )


def make_standard(spec):
    """Build a named fixture algebra from a spec string.

    Accepted: ``dihedral(n)``, ``core(n)``, ``conj(n,k)``, ``gset(n,g)``.
    """
    spec = spec.strip()
    import re as _re

    m = _re.fullmatch(r"(\w+)\(([^)]*)\)", spec)
    if not m:
        raise ArgumentError(f"bad construction spec {spec!r}")
    name, args = m.group(1), [a.strip() for a in m.group(2).split(",") if a.strip()]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise ArgumentError(f"construction arguments must be integers: {spec!r}")
    if name == "dihedral" and len(nums) == 1:
        return dihedral_quandle(nums[0])
    if name == "core" and len(nums) == 1:
        return core_quandle(nums[0])
    if name == "conj" and len(nums) in (1, 2):
        return conj_quandle(nums[0], nums[1] if len(nums) == 2 else 1)
    if name == "gset" and len(nums) == 2:
        return gset_rack(nums[0], nums[1])
    raise ArgumentError(f"unknown construction {spec!r}")


# -- text format -------------------------------------------------------------------


def _split_blocks(text):
    blocks = [[]]
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if line.strip() == "%":
            blocks.append([])
        elif line.strip():
            blocks[-1].append(line)
    if blocks and not blocks[-1]:
        blocks.pop()
    return blocks


def _parse_table(lines, elements, source, what):
    n = len(elements)
    if len(lines) != n:
        raise ParseError(f"{what} table must have {n} rows", source=source)
    table = {}
    for i, line in enumerate(lines):
        toks = line.split()
        if len(toks) != n:
            raise ParseError(
                f"{what} table row {i + 1} must have {n} entries", source=source
            )
        for j, tok in enumerate(toks):
            if tok == "-":
                continue
            if tok not in elements:
                raise ParseError(
                    f"{what} entry {tok!r} is not an element", source=source
                )
            table[(elements[i], elements[j])] = tok
    return table


def _synthesize_bar(elements, star, rel, source):
    """Invert each * column; the licensed rows must map injectively."""
    bar = {}
    for y in elements:
        licensed = [x for x in elements if rel.relate(x, y)]
        seen = {}
        for x in licensed:
            z = star.get((x, y))
            if z is None:
                continue
            if z in seen:
                raise ParseError(
                    f"cannot synthesize bar*: column {y!r} is not injective "
                    f"on licensed rows ({seen[z]!r} and {x!r} both map to {z!r})",
                    source=source,
                )
            seen[z] = x
        inverse = {}
        for x in elements:
            z = star.get((x, y))
            if z is not None:
                inverse.setdefault(z, []).append(x)
        for z, xs in inverse.items():
            if len(xs) == 1:
                bar[(z, y)] = xs[0]
            elif z in seen:
                bar[(z, y)] = seen[z]
    return bar


def parse_alg(text, kind=None, source=None, name=""):
    """Parse the `.alg` block format into a PartialAlgebra.

    Blocks: elements % star table [% bar table] [% relation rows].
    Three blocks mean elements/star/relation; a bar table requires the
    four-block form.  Omitted relation means the full relation; omitted
    bar is synthesized from PQ4.
    """
    blocks = _split_blocks(text)
    if not 2 <= len(blocks) <= 4:
        raise ParseError(
            f"expected 2 to 4 %-separated blocks, found {len(blocks)}", source=source
        )
    elements = []
    for line in blocks[0]:
        elements.extend(line.split())
    if len(set(elements)) != len(elements) or not elements:
        raise ParseError("element names must be nonempty and distinct", source=source)
    star = _parse_table(blocks[1], elements, source, "star")

    bar_lines = None
    rel_lines = None
    if len(blocks) == 3:
        rel_lines = blocks[2]
    elif len(blocks) == 4:
        bar_lines = blocks[2]
        rel_lines = blocks[3]

    if rel_lines is None:
        rel = BinaryRelation.full(elements)
    else:
        n = len(elements)
        if len(rel_lines) != n:
            raise ParseError(f"relation block must have {n} rows", source=source)
        rows = []
        for line in rel_lines:
            toks = line.split()
            if len(toks) != n or any(t not in ("0", "1") for t in toks):
                raise ParseError("relation rows must be 0/1 entries", source=source)
            rows.append([int(t) for t in toks])
        rel = BinaryRelation(elements, rows)

    if bar_lines is not None:
        bar = _parse_table(bar_lines, elements, source, "bar")
    else:
        bar = _synthesize_bar(elements, star, rel, source)

    if kind is None:
        if all(rel.matrix[i][j] for i in range(len(elements)) for j in range(len(elements))) and len(
            star
        ) == len(elements) ** 2:
            kind = "quandle"
        else:
            kind = "partial_quandle_rel"
    return PartialAlgebra(elements, star, bar, rel, kind, name=name)


def load_alg(path, kind=None):
    import os

    with open(path, "r", encoding="utf-8") as fh:
        return parse_alg(
            fh.read(), kind=kind, source=str(path),
            name=os.path.splitext(os.path.basename(path))[0],
        )
