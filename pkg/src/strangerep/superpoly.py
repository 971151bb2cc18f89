"""Supercommutative polynomials in n bosonic x_i and n fermionic theta_p.

Monomials are kept in normal order: fermion indices strictly increasing,
with all reordering signs produced at normalization time.  Relations:
x's commute with everything, thetas anticommute pairwise, theta_p^2 = 0.

Text format (ASCII): terms joined by +/-, factors joined by '*',
factors are xN[^E] and tN, coefficients are INT, INT/INT and sN (= sqrt(N)).
"""

from __future__ import annotations

from .scalars import FieldMismatchError, Scalar, ZERO, ONE


class ParseError(ValueError):
    """Syntax error in polynomial text, with byte offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


def normal_order(indices) -> tuple[int, tuple[int, ...] | None]:
    """Sort fermion indices, counting transpositions.

    Returns (sign, sorted tuple), or (0, None) if an index repeats.
    """
    idx = list(indices)
    sign = 1
    # insertion sort; fermion lists are tiny
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and idx[j - 1] == idx[j]:
            return 0, None
    return sign, tuple(idx)


def merge_fermions(f1, f2) -> tuple[int, tuple[int, ...] | None]:
    """Merge two normal-ordered fermion tuples; sign counts crossings."""
    out = []
    sign = 1
    i = j = 0
    n1 = len(f1)
    while i < n1 and j < len(f2):
        a, b = f1[i], f2[j]
        if a < b:
            out.append(a)
            i += 1
        elif a > b:
            out.append(b)
            if (n1 - i) % 2:
                sign = -sign
            j += 1
        else:
            return 0, None
    out.extend(f1[i:])
    out.extend(f2[j:])
    return sign, tuple(out)


class Monomial:
    """x^alpha * theta_{i_1}...theta_{i_t} with i_1 < ... < i_t."""

    __slots__ = ("alpha", "fermions", "_hash")

    def __init__(self, alpha, fermions=()):
        alpha = tuple(alpha)
        fermions = tuple(fermions)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "fermions", fermions)
        object.__setattr__(self, "_hash", hash((alpha, fermions)))

    def __setattr__(self, name, value):
        raise AttributeError("Monomial is immutable")

    @property
    def n(self):
        return len(self.alpha)

    @property
    def bdeg(self) -> int:
        """Total bosonic degree |alpha|."""
        return sum(self.alpha)

    @property
    def t(self) -> int:
        """Fermion count."""
        return len(self.fermions)

    @property
    def sort_key(self):
        return (self.bdeg, self.alpha, self.fermions)

    def __eq__(self, other):
        return (
            isinstance(other, Monomial)
            and self.alpha == other.alpha
            and self.fermions == other.fermions
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Monomial({self.alpha}, {self.fermions})"


def _ins_fermion(fermions, p):
    """Left-multiply by theta_p: (sign, new tuple) or None if p present."""
    if p in fermions:
        return None
    k = 0
    while k < len(fermions) and fermions[k] < p:
        k += 1
    sign = -1 if k % 2 else 1
    return sign, fermions[:k] + (p,) + fermions[k:]


def _del_fermion(fermions, p):
    """Left derivative d/dtheta_p: (sign, new tuple) or None if p absent."""
    try:
        k = fermions.index(p)
    except ValueError:
        return None
    sign = -1 if k % 2 else 1
    return sign, fermions[:k] + fermions[k + 1 :]


class SuperPolynomial:
    """Sparse scalar-weighted sum of normal-ordered monomials."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        if n < 1:
            raise ValueError("need at least one variable pair")
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono.alpha) != n:
                    raise ValueError("monomial size mismatch")
                coeff = Scalar.coerce(coeff)
                if coeff:
                    clean[mono] = coeff
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SuperPolynomial is immutable")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "SuperPolynomial":
        return SuperPolynomial(n)

    @staticmethod
    def one(n: int) -> "SuperPolynomial":
        return SuperPolynomial(n, {Monomial((0,) * n): ONE})

    @staticmethod
    def x(n: int, i: int, power: int = 1) -> "SuperPolynomial":
        if not 1 <= i <= n:
            raise IndexError(f"x index {i} out of range 1..{n}")
        if power < 0:
            raise ValueError("negative power")
        alpha = [0] * n
        alpha[i - 1] = power
        return SuperPolynomial(n, {Monomial(alpha): ONE})

    @staticmethod
    def theta(n: int, p: int) -> "SuperPolynomial":
        if not 1 <= p <= n:
            raise IndexError(f"theta index {p} out of range 1..{n}")
        return SuperPolynomial(n, {Monomial((0,) * n, (p,)): ONE})

    @staticmethod
    def from_term(n, alpha, fermions=(), coeff=ONE) -> "SuperPolynomial":
        sign, ordered = normal_order(fermions)
        if ordered is None:
            return SuperPolynomial(n)
        c = Scalar.coerce(coeff)
        if sign < 0:
            c = -c
        return SuperPolynomial(n, {Monomial(alpha, ordered): c})

    # -- basic algebra ----------------------------------------------------------

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            acc = terms.get(mono)
            terms[mono] = c if acc is None else acc + c
        return SuperPolynomial(self.n, terms)

    def __sub__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            acc = terms.get(mono)
            terms[mono] = -c if acc is None else acc - c
        return SuperPolynomial(self.n, terms)

    def __neg__(self):
        return SuperPolynomial(self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, coeff) -> "SuperPolynomial":
        c0 = Scalar.coerce(coeff)
        if not c0:
            return SuperPolynomial(self.n)
        return SuperPolynomial(self.n, {m: c * c0 for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        self._check(other)
        n = self.n
        terms: dict = {}
        for m1, c1 in self.terms.items():
            a1 = m1.alpha
            f1 = m1.fermions
            for m2, c2 in other.terms.items():
                if f1 and m2.fermions:
                    sign, fermions = merge_fermions(f1, m2.fermions)
                    if fermions is None:
                        continue
                else:
                    sign, fermions = 1, f1 + m2.fermions
                alpha = tuple(e1 + e2 for e1, e2 in zip(a1, m2.alpha))
                c = c1 * c2
                if sign < 0:
                    c = -c
                mono = Monomial(alpha, fermions)
                acc = terms.get(mono)
                terms[mono] = c if acc is None else acc + c
        return SuperPolynomial(n, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, SuperPolynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure ---------------------------------------------------------------

    def parity(self) -> int | None:
        """0/1 for homogeneous fermion-count parity, None if mixed."""
        par = None
        for mono in self.terms:
            p = mono.t % 2
            if par is None:
                par = p
            elif par != p:
                return None
        return 0 if par is None else par

    def field_d(self) -> int:
        """Common discriminant of all coefficients (0 if purely rational)."""
        d = 0
        for c in self.terms.values():
            if c.d:
                if d and c.d != d:
                    raise FieldMismatchError(
                        f"polynomial mixes sqrt({d}) and sqrt({c.d})"
                    )
                d = c.d
        return d

    def max_bdeg(self) -> int:
        """Largest |alpha| over the support (-1 for the zero polynomial)."""
        return max((m.bdeg for m in self.terms), default=-1)

    # -- derivations --------------------------------------------------------------

    def d_boson(self, i: int) -> "SuperPolynomial":
        """d/dx_i, an even derivation."""
        if not 1 <= i <= self.n:
            raise IndexError(f"x index {i} out of range 1..{self.n}")
        i -= 1
        terms = {}
        for mono, c in self.terms.items():
            e = mono.alpha[i]
            if e:
                alpha = mono.alpha[:i] + (e - 1,) + mono.alpha[i + 1 :]
                terms[Monomial(alpha, mono.fermions)] = c * e
        return SuperPolynomial(self.n, terms)

    def d_fermion(self, p: int) -> "SuperPolynomial":
        """d/dtheta_p acting from the left, an odd derivation."""
        if not 1 <= p <= self.n:
            raise IndexError(f"theta index {p} out of range 1..{self.n}")
        terms = {}
        for mono, c in self.terms.items():
            hit = _del_fermion(mono.fermions, p)
            if hit is None:
                continue
            sign, fermions = hit
            terms[Monomial(mono.alpha, fermions)] = c if sign > 0 else -c
        return SuperPolynomial(self.n, terms)

    def mul_x(self, i: int, power: int = 1) -> "SuperPolynomial":
        """Multiply by x_i^power."""
        if power < 0:
            raise ValueError("negative power")
        if not 1 <= i <= self.n:
            raise IndexError(f"x index {i} out of range 1..{self.n}")
        i -= 1
        terms = {}
        for mono, c in self.terms.items():
            alpha = mono.alpha[:i] + (mono.alpha[i] + power,) + mono.alpha[i + 1 :]
            terms[Monomial(alpha, mono.fermions)] = c
        return SuperPolynomial(self.n, terms)

    def mul_theta_left(self, p: int) -> "SuperPolynomial":
        """Left-multiply by theta_p."""
        terms = {}
        for mono, c in self.terms.items():
            hit = _ins_fermion(mono.fermions, p)
            if hit is None:
                continue
            sign, fermions = hit
            terms[Monomial(mono.alpha, fermions)] = c if sign > 0 else -c
        return SuperPolynomial(self.n, terms)

    def mul_theta_right(self, p: int) -> "SuperPolynomial":
        """Right-multiply by theta_p."""
        terms = {}
        for mono, c in self.terms.items():
            hit = _ins_fermion(mono.fermions, p)
            if hit is None:
                continue
            sign, fermions = hit
            if mono.t % 2:
                sign = -sign
            terms[Monomial(mono.alpha, fermions)] = c if sign > 0 else -c
        return SuperPolynomial(self.n, terms)

    def sorted_terms(self):
        """Terms in display order: descending graded-lex, then fermion list."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key, reverse=True)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"<{format_poly(self)}>"


# -- module-level operation surface ------------------------------------------------


def mul(f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
    return f * g


def d_boson(i: int, f: SuperPolynomial) -> SuperPolynomial:
    return f.d_boson(i)


def d_fermion(p: int, f: SuperPolynomial) -> SuperPolynomial:
    return f.d_fermion(p)


# -- text format --------------------------------------------------------------------


def _format_coeff_parts(c: Scalar):
    """Split a + b*sqrt(d) into printable (rational, surd-d) pieces."""
    parts = []
    if c.a:
        parts.append((c.a, 0))
    if c.b:
        parts.append((c.b, c.d))
    return parts


def _format_one_term(q, d, mono) -> str:
    factors = []
    num, den = q.numerator, q.denominator
    mag = abs(num)
    if mag != 1 or den != 1 or (d == 0 and mono.bdeg == 0 and not mono.fermions):
        factors.append(str(mag) if den == 1 else f"{mag}/{den}")
    if d:
        factors.append(f"s{d}")
    for i, e in enumerate(mono.alpha):
        if e == 1:
            factors.append(f"x{i + 1}")
        elif e:
            factors.append(f"x{i + 1}^{e}")
    for p in mono.fermions:
        factors.append(f"t{p}")
    return "*".join(factors)


def format_poly(f: SuperPolynomial) -> str:
    """Canonical text form; parse(format_poly(f)) == f."""
    if not f.terms:
        return "0"
    chunks = []
    for mono, coeff in f.sorted_terms():
        for q, d in _format_coeff_parts(coeff):
            body = _format_one_term(q, d, mono)
            if not chunks:
                chunks.append(body if q > 0 else "-" + body)
            else:
                chunks.append((" + " if q > 0 else " - ") + body)
    return "".join(chunks)


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.cursor = 0

    def _scan(self):
        text = self.text
        i, size = 0, len(text)
        while i < size:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in "+-*/^":
                self.tokens.append((ch, None, i))
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < size and text[j].isdigit():
                    j += 1
                self.tokens.append(("INT", int(text[i:j]), i))
                i = j
                continue
            if ch in "xts":
                j = i + 1
                while j < size and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ParseError(f"'{ch}' needs a numeric index", i)
                self.tokens.append((ch.upper(), int(text[i + 1 : j]), i))
                i = j
                continue
            raise ParseError(f"unexpected character {ch!r}", i)
        self.tokens.append(("END", None, size))

    def peek(self):
        return self.tokens[self.cursor]

    def take(self):
        tok = self.tokens[self.cursor]
        if tok[0] != "END":
            self.cursor += 1
        return tok


def parse(
    text: str,
    n: int | None = None,
    field_d: int | None = None,
    notes: list | None = None,
) -> SuperPolynomial:
    """Parse polynomial text.

    n: number of variable pairs; inferred from the largest index when omitted.
    field_d: if given, reject surds outside Q(sqrt(field_d)).
    notes: optional list collecting normalization notes (e.g. repeated
    fermion factors folding a term to zero).
    """
    lex = _Lexer(text)
    raw_terms = []  # (sign, [(kind, value, pos), ...])
    sign = 1
    kind, _, pos = lex.peek()
    if kind in "+-":
        lex.take()
        sign = -1 if kind == "-" else 1
    while True:
        atoms = []
        while True:
            kind, value, pos = lex.take()
            if kind == "INT":
                nxt = lex.peek()
                if nxt[0] == "/":
                    lex.take()
                    dkind, dval, dpos = lex.take()
                    if dkind != "INT":
                        raise ParseError("expected integer denominator", dpos)
                    if dval == 0:
                        raise ParseError("zero denominator", dpos)
                    atoms.append(("RAT", (value, dval), pos))
                else:
                    atoms.append(("RAT", (value, 1), pos))
            elif kind == "S":
                atoms.append(("SURD", value, pos))
            elif kind == "X":
                exp = 1
                if lex.peek()[0] == "^":
                    lex.take()
                    ekind, eval_, epos = lex.take()
                    if ekind != "INT":
                        raise ParseError("expected integer exponent", epos)
                    exp = eval_
                atoms.append(("X", (value, exp), pos))
            elif kind == "T":
                atoms.append(("T", value, pos))
            else:
                raise ParseError("expected a term", pos)
            if lex.peek()[0] == "*":
                lex.take()
                continue
            break
        raw_terms.append((sign, atoms))
        kind, _, pos = lex.peek()
        if kind == "END":
            break
        if kind not in "+-":
            raise ParseError(f"expected '+' or '-', got {kind!r}", pos)
        lex.take()
        sign = -1 if kind == "-" else 1

    max_index = 0
    for _, atoms in raw_terms:
        for kind, value, pos in atoms:
            if kind == "X":
                max_index = max(max_index, value[0])
            elif kind == "T":
                max_index = max(max_index, value)
    nn = n if n is not None else max(max_index, 1)

    result = SuperPolynomial.zero(nn)
    for sign, atoms in raw_terms:
        coeff = ONE if sign > 0 else -ONE
        alpha = [0] * nn
        fermions = []
        for kind, value, pos in atoms:
            if kind == "RAT":
                num, den = value
                coeff = coeff * Scalar(f"{num}/{den}")
            elif kind == "SURD":
                coeff = coeff * Scalar.sqrt(value)
            elif kind == "X":
                idx, exp = value
                if not 1 <= idx <= nn:
                    raise ParseError(f"x index {idx} out of range 1..{nn}", pos)
                alpha[idx - 1] += exp
            else:
                if not 1 <= value <= nn:
                    raise ParseError(f"t index {value} out of range 1..{nn}", pos)
                fermions.append(value)
        osign, ordered = normal_order(fermions)
        if ordered is None:
            if notes is not None:
                notes.append(
                    f"term at offset {atoms[0][2]}: repeated fermion index, folds to 0"
                )
            continue
        if osign < 0:
            coeff = -coeff
        result = result + SuperPolynomial(nn, {Monomial(alpha, ordered): coeff})

    d_seen = result.field_d()
    if field_d is not None and d_seen not in (0, field_d):
        raise FieldMismatchError(
            f"polynomial lives in Q(sqrt({d_seen})), expected Q(sqrt({field_d}))"
        )
    return result
