"""Generators C_A of the discrete realization of R(n) and the checks of its relations."""
from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import RangeError, SpectrumMismatch, StructureError
from .grid import SimplexGrid, racah_table
from .matrix import OperatorMatrix, anticommutator, charpoly, commutator, divide_linear
from .operators import (
    DifferenceOperator,
    build_racah_operator,
    kappa_beta_difference,
    kappa_coordinate,
    multiplication_operator,
    realize,
    sigma_shift,
    substituted_racah_operator,
)
from .polynomials import ParameterSet, kappa, partial_sums
from .report import Report, matrix_witness


@dataclass(frozen=True, order=True)
class LabelSet:
    """A nonempty subset A of [n], kept sorted."""

    members: tuple

    def __post_init__(self):
        members = tuple(sorted(set(int(m) for m in self.members)))
        if not members:
            raise ValueError("label sets must be nonempty")
        if members[0] < 1:
            raise RangeError(f"labels start at 1, got {members[0]}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, *members) -> "LabelSet":
        if len(members) == 1 and not isinstance(members[0], int):
            return cls(tuple(members[0]))
        return cls(members)

    @classmethod
    def interval(cls, p: int, q: int) -> "LabelSet":
        return cls(tuple(range(p, q + 1)))

    @classmethod
    def parse(cls, text: str) -> "LabelSet":
        """Accepts '1,3', '{1,3}', '13' (single digits) or '2..4'."""
        t = text.strip().strip("{}[]")
        m = re.fullmatch(r"(\d+)\s*(?:\.\.|-)\s*(\d+)", t)
        if m:
            return cls.interval(int(m.group(1)), int(m.group(2)))
        if "," in t:
            return cls(tuple(int(v) for v in t.split(",") if v.strip()))
        if t.isdigit():
            return cls(tuple(int(ch) for ch in t))
        raise ValueError(f"cannot parse label set {text!r}")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def is_interval(self) -> bool:
        return self.members[-1] - self.members[0] + 1 == len(self.members)

    @property
    def kind(self) -> str:
        if len(self.members) == 1:
            return "singleton"
        return "interval" if self.is_interval else "general"

    def issubset(self, other: "LabelSet") -> bool:
        return set(self.members) <= set(other.members)

    def isdisjoint(self, other: "LabelSet") -> bool:
        return not set(self.members) & set(other.members)

    def __or__(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.members + other.members)

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def all_label_sets(n: int) -> list[LabelSet]:
    out = []
    for size in range(1, n + 1):
        out.extend(LabelSet(c) for c in itertools.combinations(range(1, n + 1), size))
    return out


class GeneratorTable:
    """Realized generators C_A on one grid, cached per label set."""

    def __init__(self, params: ParameterSet):
        self.params = params.require_generic()
        self.grid = SimplexGrid(params)
        self.cache: dict[LabelSet, OperatorMatrix] = {}
        self._symbolic: dict[tuple, DifferenceOperator] = {}

    @property
    def n(self) -> int:
        return self.params.n

    def _check_label(self, A: LabelSet):
        if A.members[-1] > self.n:
            raise RangeError(f"label set {A} is not a subset of [1..{self.n}]")

    def symbolic_interval(self, p: int, q: int) -> DifferenceOperator:
        """C_[p..q] as a difference operator, following the sigma construction."""
        n = self.n
        if not 1 <= p <= q <= n:
            raise RangeError(f"interval [{p}..{q}] not inside [1..{n}]")
        key = (p, q)
        if key in self._symbolic:
            return self._symbolic[key]
        if p == 1:
            op = multiplication_operator(n, kappa_coordinate(q - 1))
        elif p == 2:
            m = q - 1
            op = (-build_racah_operator(m - 1, 0, self.params)).plus_multiplication(
                kappa_beta_difference(m, 0)
            )
        else:
            op = sigma_shift(self.symbolic_interval(2, q - p + 2), p - 2)
        self._symbolic[key] = op
        return op

    def interval(self, p: int, q: int) -> OperatorMatrix:
        A = LabelSet.interval(p, q)
        if A not in self.cache:
            self.cache[A] = realize(self.symbolic_interval(p, q), self.grid)
        return self.cache[A]

    def get(self, A) -> OperatorMatrix:
        """C_A for any label set (intervals directly, others through pair sums)."""
        if not isinstance(A, LabelSet):
            A = LabelSet.of(A)
        self._check_label(A)
        if A.is_interval:
            return self.interval(A.members[0], A.members[-1])
        if A not in self.cache:
            self.cache[A] = generator_general(A, self)
        return self.cache[A]

    def singleton(self, i: int) -> OperatorMatrix:
        return self.interval(i, i)

    def identity(self) -> OperatorMatrix:
        return OperatorMatrix.identity(self.grid)


def offset_interval_operator(p: int, q: int, params: ParameterSet) -> DifferenceOperator:
    """C_[p..q] for p >= 2 built directly from L_{q-p} at offset p-2 (no sigma)."""
    if not 2 <= p <= q <= params.n:
        raise RangeError(f"offset construction needs 2 <= p <= q <= n, got [{p}..{q}]")
    L = build_racah_operator(q - p, p - 2, params)
    return (-L).plus_multiplication(kappa_beta_difference(q - 1, p - 2))


def generator_interval(p: int, q: int, table: GeneratorTable) -> OperatorMatrix:
    return table.interval(p, q)


def _interval_or_zero(p: int, q: int, table: GeneratorTable) -> OperatorMatrix:
    if p > q:
        return OperatorMatrix.zero(table.grid)
    return table.interval(p, q)


def generator_pair(i: int, j: int, table: GeneratorTable) -> OperatorMatrix:
    """C_ij by inclusion-exclusion over intervals."""
    if not 1 <= i < j <= table.n:
        raise RangeError(f"pair ({i}, {j}) needs 1 <= i < j <= {table.n}")
    return (
        table.interval(i, j)
        - _interval_or_zero(i + 1, j, table)
        - _interval_or_zero(i, j - 1, table)
        + _interval_or_zero(i + 1, j - 1, table)
        + table.singleton(i)
        + table.singleton(j)
    )


def lind_sum(A: LabelSet, table: GeneratorTable) -> OperatorMatrix:
    """sum_{i<j in A} C_ij - (|A|-2) sum_{i in A} C_i, from pair and singleton generators."""
    total = OperatorMatrix.zero(table.grid)
    for i, j in itertools.combinations(A.members, 2):
        total = total + generator_pair(i, j, table)
    singles = OperatorMatrix.zero(table.grid)
    for i in A.members:
        singles = singles + table.singleton(i)
    return total - singles.scale(len(A) - 2)


def generator_general(A: LabelSet, table: GeneratorTable) -> OperatorMatrix:
    if not isinstance(A, LabelSet):
        A = LabelSet.of(A)
    table._check_label(A)
    if len(A) == 1:
        return table.singleton(A.members[0])
    if len(A) == 2:
        value = generator_pair(*A.members, table)
    else:
        value = lind_sum(A, table)
    if A.is_interval and value != table.interval(A.members[0], A.members[-1]):
        raise StructureError(f"pair reassembly of C_{A} disagrees with the interval generator")
    return value


# -- relation checks -----------------------------------------------------------


def _commuting_pairs(sets: list[LabelSet]):
    for a, b in itertools.combinations_with_replacement(sets, 2):
        if a.issubset(b) or b.issubset(a) or a.isdisjoint(b):
            yield a, b


def verify_commutation(table: GeneratorTable, sets: Iterable[LabelSet] | None = None) -> Report:
    """[C_A, C_B] = 0 whenever A, B are nested or disjoint."""
    sets = sorted(sets) if sets is not None else all_label_sets(table.n)
    rep = Report("commutation")
    for a, b in _commuting_pairs(sets):
        residual = commutator(table.get(a), table.get(b))
        rep.add("commute", [str(a), str(b)], residual.is_zero(), matrix_witness(residual))
    return rep


def verify_lind(table: GeneratorTable) -> Report:
    """C_A equals its pair expansion for every |A| >= 2, and intervals agree both ways."""
    rep = Report("lind")
    for A in all_label_sets(table.n):
        if len(A) < 2:
            continue
        residual = table.get(A) - lind_sum(A, table)
        rep.add("lind", [str(A)], residual.is_zero(), matrix_witness(residual))
    for i in range(1, table.n + 1):
        ok = table.singleton(i).scalar_value() is not None
        rep.add("central-singleton", [f"{{{i}}}"], ok)
    ok = table.interval(1, table.n).scalar_value() is not None
    rep.add("central-total", [str(LabelSet.interval(1, table.n))], ok)
    return rep


def rank_one_triples(n: int, full: bool | None = None) -> list[tuple[LabelSet, LabelSet, LabelSet]]:
    """Disjoint triples (K, L, M) of nonempty subsets of [n].

    All unordered triples when ``full`` (default for n <= 4); otherwise the
    triples of consecutive intervals K < L < M.
    """
    if full is None:
        full = n <= 4
    out = []
    if full:
        seen = set()
        for assignment in itertools.product(range(4), repeat=n):
            blocks = [tuple(i + 1 for i, a in enumerate(assignment) if a == b) for b in (1, 2, 3)]
            if not all(blocks):
                continue
            key = tuple(sorted(blocks))
            if key in seen:
                continue
            seen.add(key)
            out.append(tuple(LabelSet(b) for b in key))
    else:
        for a, b, c, d in itertools.combinations(range(1, n + 2), 4):
            out.append(
                (LabelSet.interval(a, b - 1), LabelSet.interval(b, c - 1), LabelSet.interval(c, d - 1))
            )
    out.sort(key=lambda t: tuple(s.members for s in t))
    return out


def verify_rank_one(K: LabelSet, L: LabelSet, M: LabelSet, table: GeneratorTable) -> Report:
    """The R(3) relations for C_K, C_L, C_M and their unions."""
    if not (K.isdisjoint(L) and L.isdisjoint(M) and K.isdisjoint(M)):
        raise ValueError(f"{K}, {L}, {M} are not pairwise disjoint")
    cK, cL, cM = table.get(K), table.get(L), table.get(M)
    cKL, cLM, cKM = table.get(K | L), table.get(L | M), table.get(K | M)
    cKLM = table.get(K | L | M)
    ops = [str(K), str(L), str(M)]
    rep = Report("rank-one")
    two_f = commutator(cKL, cLM)
    for label, other in (("[KM,KL]", commutator(cKM, cKL)), ("[LM,KM]", commutator(cLM, cKM))):
        residual = two_f - other
        rep.add(f"2F=[KL,LM]={label}", ops, residual.is_zero(), matrix_witness(residual))
    residual = commutator(cKM, cKL) - commutator(cLM, cKM)
    rep.add("2F:[KM,KL]=[LM,KM]", ops, residual.is_zero(), matrix_witness(residual))
    F = two_f.scale(Fraction(1, 2))
    rhs = {
        "[KL,F]": (cKL, cLM @ cKL - cKL @ cKM + (cL - cK) @ (cM - cKLM)),
        "[LM,F]": (cLM, cKM @ cLM - cLM @ cKL + (cM - cL) @ (cK - cKLM)),
        "[KM,F]": (cKM, cKL @ cKM - cKM @ cLM + (cK - cM) @ (cL - cKLM)),
    }
    for label, (lhs_op, right) in rhs.items():
        residual = commutator(lhs_op, F) - right
        rep.add(label, ops, residual.is_zero(), matrix_witness(residual))
    return rep


def verify_rank_one_family(table: GeneratorTable, triples=None, full: bool | None = None) -> Report:
    rep = Report("rank-one")
    triples = triples if triples is not None else rank_one_triples(table.n, full)
    for K, L, M in triples:
        rep.extend(verify_rank_one(K, L, M, table))
    rep.data["triples"] = [[str(K), str(L), str(M)] for K, L, M in triples]
    return rep


def span_coefficients(residual: OperatorMatrix, basis: OperatorMatrix) -> tuple[Fraction, Fraction]:
    """(d, e) with residual = d * basis + e * Id, or StructureError."""
    d = None
    size = residual.size
    for r in range(size):
        for c in range(size):
            if r != c and basis.entries[r, c] != 0:
                d = residual.entries[r, c] / basis.entries[r, c]
                break
        if d is not None:
            break
    if d is None:
        diag = [basis.entries[i, i] for i in range(size)]
        pair = next(((0, i) for i in range(1, size) if diag[i] != diag[0]), None)
        if pair is None:
            raise StructureError("basis operator is scalar; span is one-dimensional")
        i, j = pair
        d = (residual.entries[i, i] - residual.entries[j, j]) / (diag[i] - diag[j])
    e = residual.entries[0, 0] - d * basis.entries[0, 0]
    if residual != basis.scale(d).plus_identity(e):
        raise StructureError("residual is not in span{basis, Id}")
    return Fraction(d), Fraction(e)


def verify_classical_presentation(
    table: GeneratorTable, K1: OperatorMatrix | None = None, K2: OperatorMatrix | None = None
) -> Report:
    """The two-generator relations with shared d, and the equitable relations.

    By default K1 = -C_12/2 and K2 = -C_23/2, the normalisation under which
    the quadratic terms carry unit coefficients (with K1 = C_12 they carry -2).
    """
    if table.n != 3:
        raise ValueError("the classical presentation is checked on n = 3 only")
    c12, c23, c13 = table.get((1, 2)), table.get((2, 3)), table.get((1, 3))
    half = Fraction(-1, 2)
    K1 = c12.scale(half) if K1 is None else K1
    K2 = c23.scale(half) if K2 is None else K2
    if K1 == K2 or commutator(K1, K2).is_zero():
        raise ValueError("K1 and K2 must not commute")
    rep = Report("classical")
    K3 = commutator(K1, K2)
    anti = anticommutator(K1, K2)
    residuals = {
        "e1": (commutator(K2, K3) - K2 @ K2 - anti, K2),
        "e2": (commutator(K3, K1) - K1 @ K1 - anti, K1),
    }
    ds = {}
    for label, (res, basis) in residuals.items():
        try:
            d, e = span_coefficients(res, basis)
            ds[label] = d
            rep.data[label] = e
            rep.add(f"span:{label}", ["K1", "K2"], True, {"d": d, "e": e})
        except StructureError as exc:
            rep.add(f"span:{label}", ["K1", "K2"], False, str(exc))
    if len(ds) == 2:
        rep.add("shared-d", ["K1", "K2"], ds["e1"] == ds["e2"], {"d1": ds["e1"], "d2": ds["e2"]})
        rep.data["d"] = ds["e1"]

    two_f = commutator(c12, c23)
    for label, other in (("[C23,C13]", commutator(c23, c13)), ("[C13,C12]", commutator(c13, c12))):
        res = two_f - other
        rep.add(f"2F=[C12,C23]={label}", ["C12", "C23", "C13"], res.is_zero(), matrix_witness(res))
    G = (c12 + c23 + c13).scalar_value()
    rep.add("G-central", ["C12+C23+C13"], G is not None, {"G": G} if G is not None else None)
    F = two_f.scale(Fraction(1, 2))
    eq = {
        "i12": commutator(c12, F) - (c23 @ c12 - c12 @ c13),
        "i23": commutator(c23, F) - (c13 @ c23 - c23 @ c12),
        "i13": commutator(c13, F) - (c12 @ c13 - c13 @ c23),
    }
    consts = {}
    for label, res in eq.items():
        value = res.scalar_value()
        rep.add(f"scalar:{label}", ["C12", "C23", "C13"], value is not None, {"value": value} if value is not None else matrix_witness(res))
        if value is not None:
            consts[label] = value
            rep.data[label] = value
    if len(consts) == 3:
        total = sum(consts.values())
        rep.add("cyclic-sum", ["i12", "i23", "i13"], total == 0, {"sum": total})
        c = [table.singleton(i).scalar_value() for i in (1, 2, 3)]
        c123 = table.interval(1, 3).scalar_value()
        predicted = {
            "i12": (c[1] - c[0]) * (c[2] - c123),
            "i23": (c[2] - c[1]) * (c[0] - c123),
            "i13": (c[0] - c[2]) * (c[1] - c123),
        }
        for label, value in predicted.items():
            rep.add(f"central-form:{label}", ["C1", "C2", "C3", "C123"], consts[label] == value, {"expected": value, "found": consts[label]})
    return rep


def expected_spectrum(p: int, q: int, params: ParameterSet) -> Counter:
    """Multiset {kappa(|m|_{q-p}, beta_{q-1} - beta_{p-2} - 1) : m in V_k}."""
    n, N = params.n, params.N
    if not 1 <= p <= q <= n:
        raise RangeError(f"interval [{p}..{q}] not inside [1..{n}]")
    shift = params.beta_at(q - 1) - params.beta_at(p - 2) - 1
    out = Counter()
    for k in SimplexGrid(params).multi_indices():
        t = q - p
        s = partial_sums(k)[t] if t <= n - 2 else N
        out[kappa(s, shift)] += 1
    return out


def verify_spectrum(p: int, q: int, table: GeneratorTable, strict: bool = False) -> Report:
    """Divide the characteristic polynomial of C_[p..q] by the predicted linear factors."""
    rep = Report("spectrum")
    M = table.interval(p, q)
    poly = charpoly(M.entries)
    expected = expected_spectrum(p, q, table.params)
    missing = []
    for value, mult in sorted(expected.items()):
        for _ in range(mult):
            quotient, remainder = divide_linear(poly, value)
            if remainder != 0:
                missing.append(value)
                continue
            poly = quotient
    leftover = len(poly) - 1
    ok = not missing and leftover == 0
    witness = None if ok else {"missing": missing, "unmatched_degree": leftover}
    rep.add("charpoly-factorization", [str(LabelSet.interval(p, q))], ok, witness)
    rep.data[str(LabelSet.interval(p, q))] = {str(k): v for k, v in sorted(expected.items())}
    if strict and not ok:
        raise SpectrumMismatch(f"spectrum of C_[{p}..{q}] differs from prediction", missing, leftover)
    return rep


def verify_spectra(table: GeneratorTable, intervals=None) -> Report:
    rep = Report("spectrum")
    if intervals is None:
        intervals = [(p, q) for p in range(1, table.n + 1) for q in range(p, table.n + 1)]
    for p, q in intervals:
        rep.extend(verify_spectrum(p, q, table))
    return rep


def racah_eigenvalue(j: int, k, params: ParameterSet) -> Fraction:
    """Eigenvalue of L_j on R(k; .): -|k|_j (|k|_j - 1 + beta_{j+1} - beta_0)."""
    s = partial_sums(k)[j]
    return -s * (s - 1 + params.beta[j + 1] - params.beta[0])


def verify_bispectrality(table: GeneratorTable) -> Report:
    """L_j R(k; .) = eigenvalue * R(k; .) for all k, j, and [L_i, L_j] = 0."""
    params, grid = table.params, table.grid
    rep = Report("bispectral")
    ks, R = racah_table(grid)
    Ls = {j: realize(build_racah_operator(j, 0, params), grid) for j in range(1, params.n - 1)}
    for j, L in Ls.items():
        bad = []
        for r, k in enumerate(ks):
            lam = racah_eigenvalue(j, k, params)
            image = L.dot(R[r])
            if any(image[c] != lam * R[r, c] for c in range(len(grid))):
                bad.append(list(k))
        rep.add("eigen", [f"L_{j}"], not bad, {"failing_k": bad[:5], "count": len(bad)} if bad else None)
    for i, j in itertools.combinations(Ls, 2):
        res = commutator(Ls[i], Ls[j])
        rep.add("commute", [f"L_{i}", f"L_{j}"], res.is_zero(), matrix_witness(res))
    return rep


def verify_sigma(table: GeneratorTable) -> Report:
    """sigma construction of every C_[p..q], p > 2, equals the offset construction."""
    rep = Report("sigma")
    for p in range(3, table.n + 1):
        for q in range(p, table.n + 1):
            direct = realize(offset_interval_operator(p, q, table.params), table.grid)
            res = table.interval(p, q) - direct
            rep.add("sigma-vs-offset", [str(LabelSet.interval(p, q))], res.is_zero(), matrix_witness(res))
    return rep


SHIFT_COVARIANCE_CASES = ((1, 1), (1, 2), (2, 1))


def verify_shift_covariance(params: ParameterSet, cases=SHIFT_COVARIANCE_CASES) -> Report:
    """Offset construction of L_j against the offset-0 construction with substituted parameters."""
    params.require_generic()
    grid = SimplexGrid(params)
    rep = Report("shift-covariance")
    for j, offset in cases:
        direct = realize(build_racah_operator(j, offset, params), grid)
        substituted = realize(substituted_racah_operator(j, offset, params), grid)
        res = direct - substituted
        rep.add("offset-vs-substituted", [f"L_{j}", f"offset={offset}"], res.is_zero(), matrix_witness(res))
    return rep
