"""Brute-force classification of skew biderivations and linear commuting maps.

An unknown map on the window ``B(N)`` is written with one rational unknown
per (domain pair, codomain coordinate), the codomain being a larger window
``C``.  The defining identity is imposed wherever every term stays
defined, the resulting sparse system is solved exactly, and the solution
space restricted to the core pairs (all indices within ``N // 2``) is
compared with the span of the maps predicted by the classification
theorems.

Truncation protocol: the unknown is zero outside ``C``; identities are
imposed only for triples whose inner bracket stays in ``B(N)``.  Boundary
pairs may carry extra solutions, which is why the comparison happens on
the core.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import (
    BasisVector,
    Family,
    HalfInt,
    LinComb,
    Params,
    bracket_term,
    format_fraction,
)
from .linalg import (
    DEFAULT_CONFIG,
    ModularConfig,
    SolveStats,
    SparseMatrix,
    SubspaceBasis,
    in_span,
    nullspace_exact,
)
from .maps import (
    BilinearMap,
    LinearSelfMap,
    WindowBilinearMap,
    WindowSelfMap,
    bider_residual_1,
    bider_residual_2,
    central_vector,
    identity_map,
    inner_bider,
    phi0,
    phi1,
    polarized_commuting_residual,
    psi0,
    psi1,
)
from .structure import Window


class BiderCase(str, enum.Enum):
    LAMBDA1_HALF_COSET = "Lambda1HalfCoset"
    LAMBDA1_INT_COSET = "Lambda1IntCoset"
    GENERIC = "Generic"


class Mode(str, enum.Enum):
    FULL = "full"
    GRADED = "graded"


class Verdict(str, enum.Enum):
    MATCH = "match"
    EXTRA = "extra_solutions"
    MISSING = "missing_expected"


@dataclass(frozen=True)
class CaseTag:
    bider_case: BiderCase
    center_nonzero: bool
    abelianization_nontrivial: bool

    def as_dict(self) -> dict:
        return {"bider_case": self.bider_case.value, "center_nonzero": self.center_nonzero,
                "abelianization_nontrivial": self.abelianization_nontrivial}


def detect_case(p: Params) -> CaseTag:
    if p.lam == 1 and p.mu_in_s_half_plus_z():
        case = BiderCase.LAMBDA1_HALF_COSET
    elif p.lam == 1 and p.mu_in_s_plus_z():
        case = BiderCase.LAMBDA1_INT_COSET
    else:
        case = BiderCase.GENERIC
    return CaseTag(case, p.lam == 0 and p.two_mu_integral(), p.lam == -3 and p.mu_in_s_plus_z())


def default_codomain_margin(p: Params, w: Window) -> int:
    # brackets of B(N) reach degree 2N; the exceptional maps shift by at most |2 mu|
    return max(w.radius, 2) + math.ceil(abs(2 * p.mu))


def core_radius(w: Window) -> int:
    return w.radius // 2


def _valid(b: BasisVector, p: Params, C: Window) -> bool:
    return p.is_valid(b) and b in C


def _family_of_weight(wt: int) -> Family | None:
    return {0: Family.L, 2: Family.M, 1: Family.Y}.get(wt)


def _homogeneous_targets(weight: int, degree: Fraction, p: Params, C: Window,
                         with_center: bool) -> list[BasisVector]:
    out = []
    for shift, tau in ((Fraction(0), 0), (-2 * p.mu, 2), (-p.mu, 1)):
        fam = _family_of_weight(weight + tau)
        target = degree + shift
        if fam is None or (2 * target).denominator != 1:
            continue
        b = BasisVector(fam, HalfInt.of(target))
        if _valid(b, p, C) and b not in out:
            out.append(b)
    z = central_vector(p) if with_center else None
    if z is not None and z in C and z not in out:
        out.append(z)
    return sorted(out)


def graded_targets(x: BasisVector, y: BasisVector, p: Params, C: Window) -> list[BasisVector]:
    """Codomain coordinates allowed for phi(x, y) in graded mode.

    For an L-L pair of degree sum d these are L_d, M_{lam d - 2mu} and
    Y_{(lam+1)/2 d - mu}, the coordinates annihilated by ad(L_d); other
    pairs get the homogeneous targets of degree shift 0, -2mu and -mu.
    """
    if x == y:
        return []
    d = x.index.value + y.index.value
    if x.family is Family.L and y.family is Family.L:
        out = []
        for fam, target in ((Family.L, d), (Family.M, p.lam * d - 2 * p.mu),
                            (Family.Y, (p.lam + 1) / 2 * d - p.mu)):
            if (2 * target).denominator != 1:
                continue
            b = BasisVector(fam, HalfInt.of(target))
            if _valid(b, p, C):
                out.append(b)
        return out
    return _homogeneous_targets(x.family.weight + y.family.weight, d, p, C, with_center=False)


def graded_commuting_targets(b: BasisVector, p: Params, C: Window) -> list[BasisVector]:
    return _homogeneous_targets(b.family.weight, b.index.value, p, C, with_center=True)


# ------------------------------------------------------------------ systems

@dataclass
class BiderSystem:
    params: Params
    window: Window
    codomain: Window
    mode: Mode
    pairs: list[tuple[BasisVector, BasisVector]]
    allowed: list[list[BasisVector]]
    columns: list[tuple[int, BasisVector]]
    matrix: SparseMatrix
    covered_triples: int

    def column_of(self) -> dict[tuple[int, BasisVector], int]:
        return {key: j for j, key in enumerate(self.columns)}

    def pair_index(self) -> dict[tuple[BasisVector, BasisVector], int]:
        return {pr: k for k, pr in enumerate(self.pairs)}

    def vector_of(self, phi: BilinearMap) -> dict[int, Fraction] | None:
        """Coordinates of ``phi`` restricted to the window; None if it does not fit."""
        col = self.column_of()
        vec = {}
        for k, (x, y) in enumerate(self.pairs):
            for b, c in phi(x, y):
                j = col.get((k, b))
                if j is None:
                    return None
                vec[j] = c
        return vec

    def to_map(self, vec: dict[int, Fraction], name: str = "solution") -> WindowBilinearMap:
        table: dict = {}
        for j, c in vec.items():
            k, b = self.columns[j]
            table.setdefault(self.pairs[k], {})[b] = c
        return WindowBilinearMap(self.window.basis, {pr: LinComb(t) for pr, t in table.items()},
                                 skew=True, name=name)


def _windows(p: Params, w: Window, codomain_margin: int | None) -> Window:
    if w.s != p.s:
        raise ValueError("window and params disagree on s")
    cm = default_codomain_margin(p, w) if codomain_margin is None else codomain_margin
    return w.grow(cm)


def _flush(rows: list, local: dict) -> None:
    for key in sorted(local):
        row = {c: v for c, v in local[key].items() if v}
        if row:
            rows.append(row)


def _add(local: dict, key: BasisVector, col: int, val) -> None:
    row = local.get(key)
    if row is None:
        local[key] = {col: val}
    else:
        row[col] = row.get(col, 0) + val


def assemble_bider_system(p: Params, w: Window, codomain_margin: int | None = None,
                          mode: Mode | str = Mode.FULL) -> BiderSystem:
    """Linearize phi([x,y],z) = [x,phi(y,z)] + [phi(x,z),y] over the unknown table."""
    mode = Mode(mode)
    C = _windows(p, w, codomain_margin)
    basis = w.basis
    cbasis = C.basis
    pos = {b: i for i, b in enumerate(basis)}
    pairs = [(basis[i], basis[j]) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    allowed = [list(cbasis) if mode is Mode.FULL else graded_targets(x, y, p, C) for x, y in pairs]
    columns: list[tuple[int, BasisVector]] = []
    cols_of: list[list[tuple[BasisVector, int]]] = []
    for k, targets in enumerate(allowed):
        cols_of.append([(b, len(columns) + t) for t, b in enumerate(targets)])
        columns.extend((k, b) for b in targets)
    n = len(basis)
    pair_id = {}
    for k, (x, y) in enumerate(pairs):
        pair_id[(pos[x], pos[y])] = (k, 1)
        pair_id[(pos[y], pos[x])] = (k, -1)

    rows: list[dict] = []
    covered = 0
    for xi, x in enumerate(basis):
        for yi, y in enumerate(basis):
            t = bracket_term(x, y, p)
            if t is not None and t[1] not in pos:
                continue
            for zi, z in enumerate(basis):
                covered += 1
                local: dict = {}
                if t is not None:
                    pid = pair_id.get((pos[t[1]], zi))
                    if pid is not None:
                        k, sg = pid
                        f = t[0] * sg
                        for b, col in cols_of[k]:
                            _add(local, b, col, f)
                pid = pair_id.get((yi, zi))
                if pid is not None:
                    k, sg = pid
                    for b, col in cols_of[k]:
                        tt = bracket_term(x, b, p)
                        if tt is not None:
                            _add(local, tt[1], col, -sg * tt[0])
                pid = pair_id.get((xi, zi))
                if pid is not None:
                    k, sg = pid
                    for b, col in cols_of[k]:
                        tt = bracket_term(b, y, p)
                        if tt is not None:
                            _add(local, tt[1], col, -sg * tt[0])
                _flush(rows, local)
    A = SparseMatrix(len(rows), len(columns), rows)
    return BiderSystem(p, w, C, mode, pairs, allowed, columns, A, covered)


@dataclass
class CommutingSystem:
    params: Params
    window: Window
    codomain: Window
    mode: Mode
    domain: list[BasisVector]
    allowed: list[list[BasisVector]]
    columns: list[tuple[int, BasisVector]]
    matrix: SparseMatrix

    def column_of(self) -> dict[tuple[int, BasisVector], int]:
        return {key: j for j, key in enumerate(self.columns)}

    def vector_of(self, psi: LinearSelfMap) -> dict[int, Fraction] | None:
        col = self.column_of()
        vec = {}
        for k, b in enumerate(self.domain):
            for t, c in psi(b):
                j = col.get((k, t))
                if j is None:
                    return None
                vec[j] = c
        return vec

    def to_map(self, vec: dict[int, Fraction], name: str = "solution") -> WindowSelfMap:
        images: dict = {}
        for j, c in vec.items():
            k, b = self.columns[j]
            images.setdefault(self.domain[k], {})[b] = c
        return WindowSelfMap(self.domain, {b: LinComb(t) for b, t in images.items()}, name=name)


def assemble_commuting_system(p: Params, w: Window, codomain_margin: int | None = None,
                              mode: Mode | str = Mode.FULL) -> CommutingSystem:
    """Rows: coordinates of [psi(b_i), b_j] + [psi(b_j), b_i] for i <= j."""
    mode = Mode(mode)
    C = _windows(p, w, codomain_margin)
    basis = list(w.basis)
    allowed = [list(C.basis) if mode is Mode.FULL else graded_commuting_targets(b, p, C) for b in basis]
    columns: list[tuple[int, BasisVector]] = []
    cols_of = []
    for k, targets in enumerate(allowed):
        cols_of.append([(b, len(columns) + t) for t, b in enumerate(targets)])
        columns.extend((k, b) for b in targets)
    rows: list[dict] = []
    for i, bi in enumerate(basis):
        for j in range(i, len(basis)):
            bj = basis[j]
            local: dict = {}
            for src, other in ((i, bj), (j, bi)):
                for b, col in cols_of[src]:
                    tt = bracket_term(b, other, p)
                    if tt is not None:
                        _add(local, tt[1], col, tt[0])
            _flush(rows, local)
    A = SparseMatrix(len(rows), len(columns), rows)
    return CommutingSystem(p, w, C, mode, basis, allowed, columns, A)


# ------------------------------------------------------------------ reports

@dataclass
class ClassificationReport:
    kind: str
    params: Params
    window: Window
    codomain: Window
    mode: Mode
    case: CaseTag
    n_variables: int
    n_rows: int
    raw_dim: int
    core_dim: int
    predicted_dim: int
    expected_core_rank: int
    span_verdict: Verdict
    expected: dict[str, bool]
    residual_max: Fraction
    core_basis: list[list]
    prime: int | None
    basis: list = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params.as_strings(),
            "window": self.window.radius,
            "codomain_window": self.codomain.radius,
            "core_radius": core_radius(self.window),
            "mode": self.mode.value,
            "case": self.case.as_dict(),
            "n_variables": self.n_variables,
            "n_rows": self.n_rows,
            "raw_dim": self.raw_dim,
            "core_dim": self.core_dim,
            "predicted_dim": self.predicted_dim,
            "expected_core_rank": self.expected_core_rank,
            "span_verdict": self.span_verdict.value,
            "expected_in_solution_span": dict(sorted(self.expected.items())),
            "residual_max": format_fraction(self.residual_max),
            "core_basis": self.core_basis,
            "prime": str(self.prime) if self.prime is not None else None,
        }


def expected_biderivations(p: Params) -> dict[str, BilinearMap]:
    case = detect_case(p).bider_case
    out: dict[str, BilinearMap] = {"inner": inner_bider(1, p)}
    if case in (BiderCase.LAMBDA1_HALF_COSET, BiderCase.LAMBDA1_INT_COSET):
        out["phi0"] = phi0(p)
    if case is BiderCase.LAMBDA1_INT_COSET:
        out["phi1"] = phi1(p)
    return out


def expected_commuting(p: Params, domain: Sequence[BasisVector]) -> dict[str, LinearSelfMap]:
    case = detect_case(p)
    out: dict[str, LinearSelfMap] = {"id": identity_map()}
    if case.bider_case in (BiderCase.LAMBDA1_HALF_COSET, BiderCase.LAMBDA1_INT_COSET):
        out["psi0"] = psi0(p)
    if case.bider_case is BiderCase.LAMBDA1_INT_COSET:
        out["psi1"] = psi1(p)
    z = central_vector(p)
    if z is not None:
        for b in domain:
            out[f"f[{b}]"] = WindowSelfMap(domain, {b: LinComb.single(z, 1)}, name=f"f[{b}]")
    return out


def _restrict(vec: dict[int, Fraction], keep: set[int]) -> dict[int, Fraction]:
    return {j: c for j, c in vec.items() if j in keep}


def _compare(S: SubspaceBasis, expected_vecs: dict[str, dict | None], core_cols: set[int],
             ncols: int, predicted: int):
    in_span_flags = {name: (v is not None and in_span(v, S)) for name, v in expected_vecs.items()}
    E_core = SubspaceBasis.span(ncols, [_restrict(v, core_cols) for v in expected_vecs.values() if v is not None])
    S_core = SubspaceBasis.span(ncols, [_restrict(r, core_cols) for r in S.sparse_rows()])
    contained = all(in_span(r, E_core) for r in S_core.sparse_rows())
    if not all(in_span_flags.values()):
        verdict = Verdict.MISSING
    elif not contained or S_core.dim > predicted:
        verdict = Verdict.EXTRA
    elif S_core.dim != predicted or E_core.dim != predicted:
        verdict = Verdict.MISSING
    else:
        verdict = Verdict.MATCH
    return in_span_flags, E_core, S_core, verdict


def _cfg(cfg: ModularConfig | None) -> ModularConfig | None:
    return DEFAULT_CONFIG if cfg == "default" else cfg


def classify_biderivations(p: Params, w: Window, mode: Mode | str = Mode.FULL,
                           cfg: ModularConfig | None = DEFAULT_CONFIG,
                           codomain_margin: int | None = None, verify: bool = True) -> ClassificationReport:
    if w.radius < 2:
        raise ValueError("classification needs N >= 2")
    system = assemble_bider_system(p, w, codomain_margin, mode)
    stats = SolveStats()
    S = nullspace_exact(system.matrix, cfg=cfg, stats=stats)
    r = core_radius(w)
    core_pairs = {k for k, (x, y) in enumerate(system.pairs)
                  if abs(x.index.doubled) <= 2 * r and abs(y.index.doubled) <= 2 * r}
    core_cols = {j for j, (k, _) in enumerate(system.columns) if k in core_pairs}
    expected = expected_biderivations(p)
    vecs = {name: system.vector_of(phi) for name, phi in expected.items()}
    flags, E_core, S_core, verdict = _compare(S, vecs, core_cols, len(system.columns), len(expected))

    residual_max = Fraction(0)
    basis_maps = [system.to_map(v, name=f"solution[{i}]") for i, v in enumerate(S.sparse_rows())]
    if verify:
        residual_max = _verify_biderivations(basis_maps, p, w)

    core_basis = [_describe_pairs(system, row) for row in S_core.sparse_rows()]
    return ClassificationReport(
        "biderivation", p, w, system.codomain, system.mode, detect_case(p),
        len(system.columns), system.matrix.nrows, S.dim, S_core.dim, len(expected), E_core.dim,
        verdict, flags, residual_max, core_basis, stats.prime, basis_maps)


def _verify_biderivations(maps: list[WindowBilinearMap], p: Params, w: Window) -> Fraction:
    """Both axioms on every covered triple, through the map-evaluation path."""
    basis = w.basis
    inside = set(basis)
    worst = Fraction(0)
    triples1 = [(x, y, z) for x, y, z in product(basis, basis, basis)
                if _inside(bracket_term(x, y, p), inside)]
    triples2 = [(x, y, z) for x, y, z in product(basis, basis, basis)
                if _inside(bracket_term(y, z, p), inside)]
    for phi in maps:
        for x, y, z in triples1:
            worst = max(worst, bider_residual_1(phi, x, y, z, p).max_abs_coeff())
        for x, y, z in triples2:
            worst = max(worst, bider_residual_2(phi, x, y, z, p).max_abs_coeff())
    return worst


def _inside(t, inside) -> bool:
    return t is None or t[1] in inside


def _describe_pairs(system: BiderSystem, row: dict) -> list:
    table: dict = {}
    for j, c in row.items():
        k, b = system.columns[j]
        table.setdefault(k, []).append([str(b), format_fraction(c)])
    return [[str(system.pairs[k][0]), str(system.pairs[k][1]), table[k]] for k in sorted(table)]


def classify_commuting(p: Params, w: Window, mode: Mode | str = Mode.FULL,
                       cfg: ModularConfig | None = DEFAULT_CONFIG,
                       codomain_margin: int | None = None, verify: bool = True) -> ClassificationReport:
    if w.radius < 2:
        raise ValueError("classification needs N >= 2")
    system = assemble_commuting_system(p, w, codomain_margin, mode)
    stats = SolveStats()
    S = nullspace_exact(system.matrix, cfg=cfg, stats=stats)
    r = core_radius(w)
    core_idx = {k for k, b in enumerate(system.domain) if abs(b.index.doubled) <= 2 * r}
    core_cols = {j for j, (k, _) in enumerate(system.columns) if k in core_idx}
    core_domain = [system.domain[k] for k in sorted(core_idx)]
    expected = expected_commuting(p, system.domain)
    vecs = {name: system.vector_of(psi) for name, psi in expected.items()}
    predicted = 1 + sum(1 for name in expected if name.startswith("psi")) + (
        len(core_domain) if central_vector(p) is not None else 0)
    flags, E_core, S_core, verdict = _compare(S, vecs, core_cols, len(system.columns), predicted)

    basis_maps = [system.to_map(v, name=f"solution[{i}]") for i, v in enumerate(S.sparse_rows())]
    residual_max = Fraction(0)
    if verify:
        basis = w.basis
        for psi in basis_maps:
            for i, x in enumerate(basis):
                for y in basis[i:]:
                    residual_max = max(residual_max,
                                       polarized_commuting_residual(psi, x, y, p).max_abs_coeff())
    core_basis = []
    for row in S_core.sparse_rows():
        images: dict = {}
        for j, c in row.items():
            k, b = system.columns[j]
            images.setdefault(k, []).append([str(b), format_fraction(c)])
        core_basis.append([[str(system.domain[k]), images[k]] for k in sorted(images)])
    return ClassificationReport(
        "commuting", p, w, system.codomain, system.mode, detect_case(p),
        len(system.columns), system.matrix.nrows, S.dim, S_core.dim, predicted, E_core.dim,
        verdict, flags, residual_max, core_basis, stats.prime, basis_maps)
