"""The oscillator actions of gl(n|n) on superpolynomials.

For a split parameter r the matrix unit E_{a,b} acts through the case
table obtained from the canonical polynomial action by swapping d/dx_i
and -x_i for i <= r.  Derivatives always act before multiplications;
printed operator products compose with the rightmost factor innermost.
"""

from __future__ import annotations

from dataclasses import dataclass

from .liealg import AlgebraElement, superbracket
from .scalars import Scalar, ONE
from .superpoly import Monomial, SuperPolynomial, _del_fermion, _ins_fermion


@dataclass(frozen=True)
class RepParams:
    n: int
    r: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("standing assumption n >= 3")
        if not 0 <= self.r <= self.n:
            raise ValueError("need 0 <= r <= n")


def _add_term(terms, alpha, fermions, coeff):
    mono = Monomial(alpha, fermions)
    acc = terms.get(mono)
    terms[mono] = coeff if acc is None else acc + coeff


def _alpha_shift(alpha, i, di, j=None, dj=0):
    out = list(alpha)
    out[i] += di
    if j is not None:
        out[j] += dj
    return tuple(out)


def apply_unit(params: RepParams, a: int, b: int, f: SuperPolynomial) -> SuperPolynomial:
    """Image of f under the operator assigned to the matrix unit E_{a,b}."""
    n, r = params.n, params.r
    if f.n != n:
        raise ValueError("variable count mismatch")
    if not (1 <= a <= 2 * n and 1 <= b <= 2 * n):
        raise IndexError(f"unit ({a},{b}) outside 1..{2 * n}")
    terms: dict = {}
    if a <= n and b <= n:
        i, j = a, b
        if i <= r and j <= r:
            # -x_j d/dx_i - delta_ij
            for mono, c in f.terms.items():
                e = mono.alpha[i - 1]
                if e:
                    _add_term(
                        terms,
                        _alpha_shift(mono.alpha, i - 1, -1, j - 1, +1),
                        mono.fermions,
                        c * (-e),
                    )
                if i == j:
                    _add_term(terms, mono.alpha, mono.fermions, -c)
        elif i <= r < j:
            # d/dx_i d/dx_j
            for mono, c in f.terms.items():
                ej = mono.alpha[j - 1]
                if not ej:
                    continue
                alpha = _alpha_shift(mono.alpha, j - 1, -1)
                ei = alpha[i - 1]
                if not ei:
                    continue
                _add_term(
                    terms, _alpha_shift(alpha, i - 1, -1), mono.fermions, c * (ej * ei)
                )
        elif j <= r < i:
            # -x_i x_j
            for mono, c in f.terms.items():
                _add_term(
                    terms,
                    _alpha_shift(mono.alpha, i - 1, +1, j - 1, +1),
                    mono.fermions,
                    -c,
                )
        else:
            # x_i d/dx_j
            for mono, c in f.terms.items():
                e = mono.alpha[j - 1]
                if e:
                    _add_term(
                        terms,
                        _alpha_shift(mono.alpha, j - 1, -1, i - 1, +1),
                        mono.fermions,
                        c * e,
                    )
    elif a <= n < b:
        i, p = a, b - n
        # d/dtheta_p first, then d/dx_i (i <= r) or x_i (i > r)
        for mono, c in f.terms.items():
            hit = _del_fermion(mono.fermions, p)
            if hit is None:
                continue
            sign, fermions = hit
            cc = c if sign > 0 else -c
            if i <= r:
                e = mono.alpha[i - 1]
                if e:
                    _add_term(
                        terms, _alpha_shift(mono.alpha, i - 1, -1), fermions, cc * e
                    )
            else:
                _add_term(terms, _alpha_shift(mono.alpha, i - 1, +1), fermions, cc)
    elif b <= n < a:
        p, j = a - n, b
        # x_j-part first (commutes with thetas), then left-multiply theta_p
        for mono, c in f.terms.items():
            hit = _ins_fermion(mono.fermions, p)
            if hit is None:
                continue
            sign, fermions = hit
            cc = c if sign > 0 else -c
            if j <= r:
                _add_term(terms, _alpha_shift(mono.alpha, j - 1, +1), fermions, -cc)
            else:
                e = mono.alpha[j - 1]
                if e:
                    _add_term(
                        terms, _alpha_shift(mono.alpha, j - 1, -1), fermions, cc * e
                    )
    else:
        p, q = a - n, b - n
        # theta_p d/dtheta_q
        for mono, c in f.terms.items():
            hit = _del_fermion(mono.fermions, q)
            if hit is None:
                continue
            sign1, fermions = hit
            hit2 = _ins_fermion(fermions, p)
            if hit2 is None:
                continue
            sign2, fermions = hit2
            _add_term(terms, mono.alpha, fermions, c if sign1 * sign2 > 0 else -c)
    return SuperPolynomial(n, terms)


def apply_element(
    params: RepParams, element: AlgebraElement, f: SuperPolynomial
) -> SuperPolynomial:
    """Linear extension of apply_unit over the sparse entries of element."""
    if element.n != params.n:
        raise ValueError("size mismatch")
    total: dict = {}
    for (a, b), c in element.entries.items():
        cc = Scalar(c)
        for mono, coeff in apply_unit(params, a, b, f).terms.items():
            acc = total.get(mono)
            add = coeff * cc
            total[mono] = add if acc is None else acc + add
    return SuperPolynomial(params.n, total)


def apply_word(params: RepParams, word, f: SuperPolynomial) -> SuperPolynomial:
    """Apply a printed operator product A_1 A_2 ... A_m, rightmost factor first."""
    for element in reversed(list(word)):
        f = apply_element(params, element, f)
    return f


def degree_eigenvalue(params: RepParams, mono: Monomial) -> int:
    r = params.r
    alpha = mono.alpha
    return sum(alpha[r:]) - sum(alpha[:r]) + len(mono.fermions)


def degree_op(params: RepParams, f: SuperPolynomial) -> SuperPolynomial:
    """D = -sum_{i<=r} x_i d_i + sum_{j>r} x_j d_j + sum_p theta_p dtheta_p."""
    terms = {}
    for mono, c in f.terms.items():
        k = degree_eigenvalue(params, mono)
        if k:
            terms[mono] = c * k
    return SuperPolynomial(params.n, terms)


def homomorphism_defect(
    params: RepParams,
    a: AlgebraElement,
    b: AlgebraElement,
    f: SuperPolynomial,
) -> SuperPolynomial:
    """phi([a,b])f - (phi(a)phi(b) - (-1)^{|a||b|} phi(b)phi(a))f.

    Identically zero iff phi acts as a representation on this input;
    the operation exists to test exactly that.
    """
    pa, pb = a.parity(), b.parity()
    if pa is None or pb is None:
        raise ValueError("homomorphism defect needs parity-homogeneous elements")
    lhs = apply_element(params, superbracket(a, b), f)
    ab = apply_element(params, a, apply_element(params, b, f))
    ba = apply_element(params, b, apply_element(params, a, f))
    rhs = ab + ba if (pa and pb) else ab - ba
    return lhs - rhs


def weight_of_monomial(params: RepParams, cartan, mono: Monomial) -> tuple:
    """Joint eigenvalue of the Cartan images on one monomial; exact integers."""
    f = SuperPolynomial(params.n, {mono: ONE})
    out = []
    for h in cartan:
        g = apply_element(params, h, f)
        if not g:
            out.append(0)
            continue
        if set(g.terms) != {mono}:
            raise ValueError("cartan image is not diagonal on monomials")
        c = g.terms[mono]
        if c.b or c.a.denominator != 1:
            raise ValueError("non-integer weight")
        out.append(int(c.a))
    return tuple(out)


# -- canonical vectors ------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalVector:
    name: str
    params: dict
    value: SuperPolynomial


class TableDomainError(ValueError):
    """No generator-table row matches the given parameters."""


def _theta_range(n: int, lo: int, hi: int) -> SuperPolynomial:
    """theta_lo * ... * theta_hi (empty product when lo > hi)."""
    fermions = tuple(range(max(lo, 1), hi + 1))
    if len(fermions) != max(0, hi - lo + 1):
        raise TableDomainError(f"theta range {lo}..{hi} leaves 1..{n}")
    return SuperPolynomial(n, {Monomial((0,) * n, fermions): ONE})


def _theta_hat(n: int, lo: int, hi: int, skip: int) -> SuperPolynomial:
    """theta_lo ... theta_hi with theta_skip omitted (plain product, no sign)."""
    if lo < 1 or hi > n:
        raise TableDomainError(f"theta range {lo}..{hi} leaves 1..{n}")
    fermions = tuple(q for q in range(lo, hi + 1) if q != skip)
    return SuperPolynomial(n, {Monomial((0,) * n, fermions): ONE})


def _sgn(flag: bool) -> Scalar:
    return ONE if flag else -ONE


def xi(n: int) -> SuperPolynomial:
    """sum_i x_i theta_i."""
    return xi_r(n, 0)


def xi_r(n: int, r: int) -> SuperPolynomial:
    """sum_{i=r+1}^n x_i theta_i (the fermionic-tail reading of the range)."""
    out = SuperPolynomial.zero(n)
    for i in range(r + 1, n + 1):
        out = out + SuperPolynomial.x(n, i).mul_theta_right(i)
    return out


def xi_prime(n: int, r: int) -> SuperPolynomial:
    """sum_{j=1}^r x_j theta_j."""
    out = SuperPolynomial.zero(n)
    for j in range(1, r + 1):
        out = out + SuperPolynomial.x(n, j).mul_theta_right(j)
    return out


def v_t(n: int, t: int) -> SuperPolynomial:
    """sum_{i=1}^t (-1)^{i-1} x_i theta_1...^theta_i...theta_t."""
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= {n}")
    out = SuperPolynomial.zero(n)
    for i in range(1, t + 1):
        piece = SuperPolynomial.x(n, i) * _theta_hat(n, 1, t, i)
        out = out + piece.scale(_sgn(i % 2 == 1))
    return out


def hatted_sum(n: int, lo: int, hi: int, parity_plus_even=True) -> SuperPolynomial:
    """sum_{p=lo}^{hi} (-1)^p x_p theta_lo...^theta_p...theta_hi."""
    out = SuperPolynomial.zero(n)
    for p in range(lo, hi + 1):
        piece = SuperPolynomial.x(n, p) * _theta_hat(n, lo, hi, p)
        out = out + piece.scale(_sgn(p % 2 == 0))
    return out


def p_minimal_vector(n: int, k: int) -> SuperPolynomial:
    """x_n^{n-k-2} sum_i (-1)^i x_i theta_1...^theta_i...theta_n (r=n chains)."""
    if k > n - 2:
        raise ValueError("need k <= n-2")
    return hatted_sum(n, 1, n).mul_x(n, n - k - 2)


def q_pair_generator(n: int, k: int, sign: int) -> SuperPolynomial:
    """x_1^k +- sqrt(k) x_1^{k-1} theta_1 over Q(sqrt(k))."""
    if k < 1:
        raise ValueError("need k >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    surd = Scalar.sqrt(k) if sign > 0 else -Scalar.sqrt(k)
    head = SuperPolynomial.x(n, 1, k)
    return head + SuperPolynomial.x(n, 1, k - 1).mul_theta_right(1).scale(surd)


def lemma22_f_generator(n: int, k: int, t: int) -> SuperPolynomial:
    """x_1^{k-t} theta_{n-t+1}...theta_n."""
    return _theta_range(n, n - t + 1, n).mul_x(1, k - t)


def lemma22_g_generator(n: int, k: int, t: int) -> SuperPolynomial:
    """x_1^{k-t-1} theta_{n-t+2}...theta_n xi."""
    return _theta_range(n, n - t + 2, n).mul_x(1, k - t - 1) * xi(n)


def lemma24_u_generator(n: int, k: int, t: int) -> SuperPolynomial | None:
    """x_n^{t-k-1} sum_{p=n-t}^n (-1)^p x_p theta_{n-t}...^theta_p...theta_n.

    None at t = n, where the printed pattern is ill-formed and the summand
    it would generate is zero.
    """
    if t >= n:
        return None
    return hatted_sum(n, n - t, n).mul_x(n, t - k - 1)


def lemma24_g_generator(n: int, k: int, t: int) -> SuperPolynomial:
    """x_n^{t-k} theta_{n-t+1}...theta_n."""
    return _theta_range(n, n - t + 1, n).mul_x(n, t - k)


def lemma31_generators(n: int, k: int, t: int):
    """Generator pair for the even-Q split of the (k,t) bidegree component.

    The second entry is None in the degenerate boundary cases: at t=0 the
    printed second generator collapses onto the first (v_1 = x_1), at t=k
    its exponent goes negative.
    """
    first = _theta_range(n, 1, t).mul_x(1, k - t)
    if t == 0 or t >= k:
        return first, None
    return first, v_t(n, t + 1).mul_x(1, k - t - 1)


def thm27_generator(n: int, r: int, k: int) -> SuperPolynomial:
    """Minimal-submodule generator for 0<r<n: x_{r+1}^k (k>0) or x_r^{-k} (k<=0)."""
    if k > 0:
        return SuperPolynomial.x(n, r + 1, k)
    return SuperPolynomial.x(n, r, -k)


def _validate_bidegree(poly, n, r, k, l, where):
    if not poly:
        raise TableDomainError(
            f"{where}: generator vanished for (n={n},r={r},k={k},l={l})"
        )
    params = RepParams(n, r)
    for mono in poly.terms:
        if mono.t != l or degree_eigenvalue(params, mono) != k:
            raise TableDomainError(
                f"{where}: generator leaves the (k={k}, l={l}) component for "
                f"(n={n},r={r}) — printed row invalid here"
            )


def table1_generator(n: int, r: int, k: int, l: int) -> tuple[SuperPolynomial, int]:
    """Generator of the V-side even submodule of the (k,l) slice; (vector, row)."""
    if not 1 <= r <= n - 1:
        raise TableDomainError("table rows need 1 <= r <= n-1")
    chain = 2 * l == k + n - r
    x = SuperPolynomial.x
    if l < n - r and l <= k:
        out, row = _theta_range(n, n - l + 1, n).mul_x(r + 1, k - l), 1
    elif k < l < n - r:
        out, row = _theta_range(n, n - l + 1, n).mul_x(r, l - k), 2
    elif n - r <= l <= k and not chain:
        head = (_theta_range(n, n - l, r) * _theta_range(n, r + 2, n)).mul_x(
            r + 1, k - l
        ).scale(k - l + 1)
        tail = SuperPolynomial.zero(n)
        for p in range(n - l, r + 1):
            piece = (
                x(n, p)
                * _theta_hat(n, n - l, r, p)
                * _theta_range(n, r + 1, n)
            ).mul_x(r + 1, k - l + 1)
            tail = tail + piece.scale(_sgn((p - r) % 2 == 0))
        out, row = head + tail, 3
    elif n - r <= l <= k and chain:
        out = SuperPolynomial.zero(n)
        for p in range(n - l - 1, r + 1):
            piece = (
                x(n, p)
                * _theta_hat(n, n - l - 1, r, p)
                * _theta_range(n, r + 2, n)
            ).mul_x(r + 1, k - l + 1)
            out = out + piece.scale(_sgn(p % 2 == 0))
        row = 4
    elif l > k and l >= n - r:
        out = SuperPolynomial.zero(n)
        for p in range(n - l, r + 1):
            piece = (
                x(n, p) * _theta_hat(n, n - l, r, p) * _theta_range(n, r + 1, n)
            ).mul_x(r, l - k - 1)
            out = out + piece.scale(_sgn(p % 2 == 0))
        row = 5
    else:
        raise TableDomainError(f"no V-table row matches (n={n},r={r},k={k},l={l})")
    _validate_bidegree(out, n, r, k, l, f"table1 row {row}")
    return out, row


def table2_generator(n: int, r: int, k: int, l: int) -> tuple[SuperPolynomial, int]:
    """Generator of the W-side even submodule of the (k,l) slice; (vector, row).

    The printed n-r <= l < k row carries exponent l-k, negative on its whole
    region; k-l is used instead (it matches the representative in the proof
    of the 0<r<n composition-series theorem).
    """
    if not 1 <= r <= n - 1:
        raise TableDomainError("table rows need 1 <= r <= n-1")
    chain = 2 * l == k + n - r
    x = SuperPolynomial.x
    if l < k and l <= n - r:
        out = (xi_r(n, r) * _theta_range(n, n - l + 2, n)).mul_x(r + 1, k - l - 1)
        row = 1
    elif k <= l <= n - r and not chain:
        head = (
            SuperPolynomial.theta(n, r) * _theta_range(n, n - l + 2, n)
        ).mul_x(r, l - k).scale(l - k + 1)
        tail = (xi_r(n, r) * _theta_range(n, n - l + 2, n)).mul_x(r, l - k + 1)
        out, row = head + tail, 2
    elif k <= l <= n - r and chain:
        out = (
            SuperPolynomial.theta(n, r) * xi_r(n, r) * _theta_range(n, n - l + 3, n)
        ).mul_x(r, l - k + 1)
        row = 3
    elif n - r <= l < k:
        out, row = _theta_range(n, n - l + 1, n).mul_x(r + 1, k - l), 4
    elif l >= k and l > n - r:
        out, row = _theta_range(n, n - l + 1, n).mul_x(r, l - k), 5
    else:
        raise TableDomainError(f"no W-table row matches (n={n},r={r},k={k},l={l})")
    _validate_bidegree(out, n, r, k, l, f"table2 row {row}")
    return out, row


# -- basis families of the structure lemmas -----------------------------------------


def _mono_poly(n, alpha, fermions, coeff=ONE):
    return SuperPolynomial(n, {Monomial(tuple(alpha), tuple(fermions)): coeff})


def f_vec(n: int, k: int, t: int, alpha, fermions) -> SuperPolynomial:
    """(k+n-2t) x^a theta_I + the g-type double sum."""
    return _mono_poly(n, alpha, fermions, Scalar(k + n - 2 * t)) + g_vec(
        n, k, t, alpha, fermions
    )


def g_vec(n: int, k: int, t: int, alpha, fermions) -> SuperPolynomial:
    """sum_{p,s} (-1)^p a_{i_p} x^{a-e_{i_p}+e_s} theta_s theta_{I minus i_p}."""
    out = SuperPolynomial.zero(n)
    fermions = tuple(fermions)
    for p, ip in enumerate(fermions, start=1):
        e = alpha[ip - 1]
        if not e:
            continue
        coeff = Scalar(-e) if p % 2 else Scalar(e)
        rest = fermions[: p - 1] + fermions[p:]
        base = list(alpha)
        base[ip - 1] -= 1
        for s in range(1, n + 1):
            shifted = list(base)
            shifted[s - 1] += 1
            out = out + _mono_poly(n, shifted, rest, coeff).mul_theta_left(s)
    return out


def _pm_sum(n, alpha, fermions) -> SuperPolynomial:
    """sum_{p,s} (-1)^p a_s x^{a+e_{i_p}-e_s} theta_s theta_{I minus i_p}."""
    out = SuperPolynomial.zero(n)
    fermions = tuple(fermions)
    for p, ip in enumerate(fermions, start=1):
        psign = -1 if p % 2 else 1
        rest = fermions[: p - 1] + fermions[p:]
        for s in range(1, n + 1):
            e = alpha[s - 1]
            if not e:
                continue
            shifted = list(alpha)
            shifted[ip - 1] += 1
            shifted[s - 1] -= 1
            out = out + _mono_poly(n, shifted, rest, Scalar(psign * e)).mul_theta_left(s)
    return out


def fp_vec(n: int, k: int, t: int, alpha, fermions) -> SuperPolynomial:
    """(t-k) x^a theta_I + sum_{p,s} (-1)^p a_s x^{a+e_{i_p}-e_s} theta_s theta_{I^p}."""
    return _mono_poly(n, alpha, fermions, Scalar(t - k)) + _pm_sum(n, alpha, fermions)


def gp_vec(n: int, k: int, t: int, alpha, fermions) -> SuperPolynomial:
    """t x^a theta_I - the same double sum."""
    return _mono_poly(n, alpha, fermions, Scalar(t)) - _pm_sum(n, alpha, fermions)


def h_vec(n: int, k: int, alpha, fermions, sign: int) -> SuperPolynomial:
    """fp-type vector extended by +- sqrt(k) sum_s a_s x^{a-e_s} theta_I theta_s."""
    t = len(fermions)
    out = fp_vec(n, k, t, alpha, fermions)
    surd = Scalar.sqrt(k) if sign > 0 else -Scalar.sqrt(k)
    for s in range(1, n + 1):
        e = alpha[s - 1]
        if not e:
            continue
        shifted = list(alpha)
        shifted[s - 1] -= 1
        out = out + _mono_poly(n, shifted, fermions, surd * e).mul_theta_right(s)
    return out


_CANONICAL = {
    "xi": xi,
    "xi_r": xi_r,
    "xi_prime": xi_prime,
    "v_t": v_t,
    "p_minimal": p_minimal_vector,
    "q_pair": q_pair_generator,
    "table1": lambda n, r, k, l: table1_generator(n, r, k, l)[0],
    "table2": lambda n, r, k, l: table2_generator(n, r, k, l)[0],
    "thm27": thm27_generator,
    "lemma22_f": lemma22_f_generator,
    "lemma22_g": lemma22_g_generator,
    "lemma24_u": lemma24_u_generator,
    "lemma24_g": lemma24_g_generator,
}


def canonical(name: str, **params) -> CanonicalVector:
    """Named constructor for the distinguished vectors."""
    try:
        fn = _CANONICAL[name]
    except KeyError:
        raise KeyError(f"unknown canonical vector {name!r}") from None
    value = fn(**params)
    if value is None:
        value = SuperPolynomial.zero(params["n"])
    return CanonicalVector(name, dict(params), value)
