"""Search for multiplicities z over subgroups L of G x G such that
C = I + sum z_L Delta(L) is non-singular while D^T C D is singular.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import _accel
from .cartan import (CartanMatrix, DecompositionMatrix, DeltaMatrix, complex_cartan,
                     delta_matrix, det_exact, dimension_sum, kernel_vector, matmul,
                     modular_cartan, rank_rational, transpose)
from .chartab import CharacterTable, character_table
from .monoid import CapExceeded, DEFAULT_POINT_CAP, build_biset, oracle_matrix
from .perm import DEFAULT_ELEMENT_CAP, GroupTooLarge, PairSubgroup, PermGroup

DEFAULT_BOX_BOUND = 10
MAX_BOX_POINTS = 10 ** 8
DEFAULT_KERNEL_BOUND = 32
DEFAULT_Z_BOUND = 500


class SearchTooLarge(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    """Two independent routes to the same quantity disagreed."""


# ---------------------------------------------------------------- candidate pool

@dataclass
class Candidate:
    name: str
    subgroup: PairSubgroup
    delta: DeltaMatrix


@dataclass
class CandidatePool:
    candidates: list[Candidate]
    truncated: bool = False

    def __len__(self):
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.candidates]

    @property
    def deltas(self) -> list[DeltaMatrix]:
        return [c.delta for c in self.candidates]

    def default_active(self) -> list[int]:
        """Candidates with Delta != I, plus the first one whose Delta is I."""
        active, seen_identity = [], False
        for i, c in enumerate(self.candidates):
            if not c.delta.is_identity():
                active.append(i)
            elif not seen_identity:
                active.append(i)
                seen_identity = True
        return active


def make_pool(table: CharacterTable, subgroups: Sequence[PairSubgroup],
              names: Sequence[str] | None = None) -> CandidatePool:
    names = names or [L.name or f"L{i}" for i, L in enumerate(subgroups)]
    return CandidatePool([Candidate(n, L, delta_matrix(table, L))
                          for n, L in zip(names, subgroups)])


def _conjugation_generators(G: PermGroup) -> list[tuple[int, int]]:
    gens = [G.index(g) for g in G.generators]
    return [(g, 0) for g in gens] + [(0, g) for g in gens]


def _conjugate_flat(G: PermGroup, flat: np.ndarray, g: int, h: int) -> tuple[int, ...]:
    N = G.order
    mul, inv = G.mul, G.inv
    a, b = flat // N, flat % N
    na = mul[mul[g, a], inv[g]].astype(np.int64)
    nb = mul[mul[h, b], inv[h]].astype(np.int64)
    return tuple(sorted((na * N + nb).tolist()))


def conjugacy_orbit(G: PermGroup, flat: Sequence[int]) -> set[tuple[int, ...]]:
    """All G x G-conjugates of a subgroup given by sorted flat indices."""
    start = tuple(sorted(flat))
    orbit = {start}
    frontier = [start]
    gens = _conjugation_generators(G)
    while frontier:
        new = []
        for H in frontier:
            arr = np.array(H, dtype=np.int64)
            for g, h in gens:
                K = _conjugate_flat(G, arr, g, h)
                if K not in orbit:
                    orbit.add(K)
                    new.append(K)
        frontier = new
    return orbit


def conjugacy_key(L: PairSubgroup) -> tuple[int, ...]:
    """Smallest conjugate of L, as sorted flat indices; equal keys iff conjugate."""
    return min(conjugacy_orbit(L.parent, sorted(L.flat)))


def _as_pair_subgroup(G: PermGroup, flat: Sequence[int], name: str) -> PairSubgroup:
    N = G.order
    elems = [divmod(f, N) for f in flat]
    left = sorted({a for a, _ in elems})
    right = sorted({b for _, b in elems})
    factors = (tuple(left), tuple(right)) if len(left) * len(right) == len(elems) else None
    return PairSubgroup(G, elems, factors=factors, name=name)


def enumerate_pair_subgroups(G: PermGroup, order_cap: int | None = None,
                             table: CharacterTable | None = None,
                             limit: int | None = None, max_generators: int = 2,
                             element_cap: int = DEFAULT_ELEMENT_CAP) -> CandidatePool:
    """Subgroups of G x G with at most ``max_generators`` generators, up to conjugacy.

    Level k extends one representative of every conjugacy class found at
    level k - 1 by each element outside it; conjugating a generating set
    conjugates the subgroup, so representatives suffice. Representatives are
    the smallest conjugate (sorted flat indices) and the pool is ordered by
    subgroup order, then by those indices. ``order_cap`` drops subgroups
    larger than it; ``limit`` stops after that many classes and marks the
    pool truncated.
    """
    N = G.order
    total = N * N
    if total > element_cap:
        raise GroupTooLarge(f"|G x G| = {total} exceeds the element cap {element_cap}")
    mul = G.mul
    seen: set[tuple[int, ...]] = set()
    reps: list[tuple[int, ...]] = []
    truncated = False

    def consider(flat, gens, level):
        nonlocal truncated
        if flat in seen:
            return
        orbit = conjugacy_orbit(G, flat)
        seen.update(orbit)
        level.append((flat, gens))
        if order_cap is None or len(flat) <= order_cap:
            if limit is not None and len(reps) >= limit:
                truncated = True
                return
            reps.append(min(orbit))

    level: list = []
    consider((0,), (), level)
    for _ in range(max_generators):
        previous, level = level, []
        for flat, gens in previous:
            members = set(flat)
            for c in range(total):
                if truncated:
                    break
                if c not in members:
                    consider(tuple(_accel.closure_pairs(mul, list(gens) + [c], total)),
                             gens + (c,), level)
        if not level or truncated:
            break
    reps.sort(key=lambda k: (len(k), k))
    if table is None:
        table = character_table(G)
    cands = []
    for i, key in enumerate(reps):
        L = _as_pair_subgroup(G, key, f"P{i}")
        cands.append(Candidate(L.name, L, delta_matrix(table, L)))
    return CandidatePool(cands, truncated)


def find_conjugate(pool: CandidatePool, L: PairSubgroup) -> int | None:
    """Index of the pool member conjugate to L, if any."""
    orbit = conjugacy_orbit(L.parent, sorted(L.flat))
    for i, c in enumerate(pool.candidates):
        if tuple(sorted(c.subgroup.flat)) in orbit:
            return i
    return None


# ---------------------------------------------------------------- searching

@dataclass
class Counterexample:
    names: tuple[str, ...]
    z: tuple[int, ...]
    complex: CartanMatrix
    modular: CartanMatrix
    det_complex: int
    det_modular: int
    kernel: list[int] | None

    def to_dict(self) -> dict:
        return {
            "subgroups": list(self.names),
            "z": list(self.z),
            "complex_cartan": self.complex.to_dict(),
            "modular_cartan": self.modular.to_dict(),
            "det_complex": self.det_complex,
            "det_modular": self.det_modular,
            "det_modular_mod_p": self.det_modular % self.modular.prime,
            "kernel_vector": self.kernel,
        }


@dataclass
class SearchResult:
    strategy: str
    hits: list[Counterexample]
    scanned: int
    seconds: float
    settings: dict = field(default_factory=dict)

    @property
    def found(self) -> Counterexample | None:
        return self.hits[0] if self.hits else None

    @property
    def exhausted(self) -> bool:
        return not self.hits

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "settings": self.settings,
            "status": "exhausted" if self.exhausted else "found",
            "scanned": self.scanned,
            "seconds": round(self.seconds, 3),
            "counterexample": self.found.to_dict() if self.found else None,
            "hits": [h.to_dict() for h in self.hits],
        }


class _Problem:
    """Pool restricted to the active candidates, with D^T Delta D precomputed."""

    def __init__(self, pool: CandidatePool, D: DecompositionMatrix,
                 active: Sequence[int] | None):
        if active is None:
            active = pool.default_active()
        self.active = list(active)
        self.cands = [pool.candidates[i] for i in self.active]
        if not self.cands:
            labels = pool.candidates[0].delta.labels if pool.candidates else D.ordinary_labels
        else:
            labels = self.cands[0].delta.labels
        self.labels = tuple(labels)
        self.D = D.reindexed(self.labels)
        Dm = self.D.entries
        Dt = transpose(Dm)
        self.deltas = [c.delta.reindexed(self.labels) for c in self.cands]
        self.gram = matmul(Dt, Dm)
        self.projected = [matmul(matmul(Dt, d.entries), Dm) for d in self.deltas]
        self.k = len(self.cands)
        self.m = len(D.modular_labels)
        self.n = len(self.labels)

    def modular_det(self, z) -> int:
        m = self.m
        M = [[self.gram[i][j] + sum(zz * P[i][j] for zz, P in zip(z, self.projected) if zz)
              for j in range(m)] for i in range(m)]
        return det_exact(M)

    def complex_det(self, z) -> int:
        n = self.n
        M = [[int(i == j) + sum(zz * d.entries[i][j] for zz, d in zip(z, self.deltas) if zz)
              for j in range(n)] for i in range(n)]
        return det_exact(M)

    def verify(self, z) -> Counterexample | None:
        """Full recomputation through the Cartan engine; None unless it is a counterexample."""
        if self.k:
            C = complex_cartan(self.deltas, z)
        else:
            C = CartanMatrix(self.labels, tuple(tuple(int(i == j) for j in range(self.n))
                                                for i in range(self.n)))
        Cm = modular_cartan(C, self.D)
        dc, dm = C.det(), Cm.det()
        if dc == 0 or dm != 0:
            return None
        return Counterexample(tuple(c.name for c in self.cands), tuple(int(x) for x in z),
                              C, Cm, dc, dm, kernel_vector(Cm.entries))


def _box_chunk(problem: _Problem, first_values, bound: int, all_hits: bool):
    hits, scanned = [], 0
    rest = range(bound + 1)
    for head in first_values:
        for tail in itertools.product(rest, repeat=problem.k - 1):
            z = (head,) + tail
            scanned += 1
            if problem.modular_det(z) != 0 or problem.complex_det(z) == 0:
                continue
            hit = problem.verify(z)
            if hit is None:
                raise InternalInconsistency(f"fast determinant path disagrees at z = {z}")
            hits.append(hit)
            if not all_hits:
                return hits, scanned
    return hits, scanned


def search_bruteforce(pool: CandidatePool, D: DecompositionMatrix,
                      box_bound: int = DEFAULT_BOX_BOUND, active: Sequence[int] | None = None,
                      all_hits: bool = False, threads: int = 1,
                      box_cap: int = MAX_BOX_POINTS) -> SearchResult:
    """Scan z in [0, box_bound]^k lexicographically; the first hit in that order wins."""
    start = time.perf_counter()
    problem = _Problem(pool, D, active)
    if (box_bound + 1) ** problem.k > box_cap:
        raise SearchTooLarge(
            f"box of {box_bound + 1}^{problem.k} points exceeds {box_cap}; "
            "restrict the active candidates or use the kernel-guided search")
    settings = {"box_bound": box_bound, "active": [c.name for c in problem.cands],
                "prime": D.prime}
    if problem.k == 0:
        hit = problem.verify(())
        return SearchResult("box", [hit] if hit else [], 1, time.perf_counter() - start,
                            settings)
    heads = list(range(box_bound + 1))
    threads = max(1, min(threads, len(heads)))
    # contiguous slices of the leading coordinate keep the global scan order
    chunks = [heads[i * len(heads) // threads:(i + 1) * len(heads) // threads]
              for i in range(threads)]
    if threads == 1:
        results = [_box_chunk(problem, chunks[0], box_bound, all_hits)]
    else:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(lambda c: _box_chunk(problem, c, box_bound, all_hits), chunks))
    hits, scanned = [], 0
    for h, s in results:
        hits.extend(h)
        scanned += s
    if not all_hits:
        hits = hits[:1]
    return SearchResult("box", hits, scanned, time.perf_counter() - start, settings)


def kernel_vectors(m: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Primitive nonzero integer vectors up to sign, by max-norm then lexicographically."""
    for norm in range(1, bound + 1):
        inner, full = range(-norm + 1, norm), range(-norm, norm + 1)
        shell = []
        # i = first coordinate of absolute value norm
        for i in range(m):
            for head in itertools.product(inner, repeat=i):
                for tail in itertools.product(full, repeat=m - i - 1):
                    for edge in (-norm, norm):
                        shell.append(head + (edge,) + tail)
        shell.sort()
        for v in shell:
            first = next(x for x in v if x)
            if first > 0 and math.gcd(*v) == 1:
                yield v


def _rref_int(rows: list[list[int]], ncols: int):
    """Fraction-free reduced row echelon form over Z.

    Each pivot row keeps an integer pivot d (not scaled to 1) and every other
    row is zero in its column; rows are divided by their content to keep
    entries small. Returns (rows, pivot columns).
    """
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        pv = pr[col]
        for i in range(len(a)):
            f = a[i][col]
            if i != r and f:
                row = [pv * x - f * y for x, y in zip(a[i], pr)]
                g = math.gcd(*row)
                a[i] = [x // g for x in row] if g > 1 else row
        pivots.append(col)
        r += 1
    return a, pivots


def bounded_nonnegative_solutions(A: Sequence[Sequence[int]], rhs: Sequence[int],
                                  bound: int) -> Iterator[tuple[int, ...]]:
    """Integer z with A z = rhs and 0 <= z_i <= bound.

    Exact RREF over Q, then enumeration of the free variables (in index
    order, lexicographically) with the last free variable restricted to the
    interval that keeps every pivot variable inside [0, bound].
    """
    m = len(A)
    k = len(A[0]) if m else 0
    aug = [[int(x) for x in A[i]] + [int(rhs[i])] for i in range(m)]
    red, pivots = _rref_int(aug, k)
    if any(row[k] and not any(row[:k]) for row in red):
        return
    red = red[:len(pivots)]
    free = [c for c in range(k) if c not in pivots]
    # pivot_value = const - sum coef[f] * t_f
    consts = [Fraction(row[k], row[pc]) for row, pc in zip(red, pivots)]
    coefs = [[Fraction(row[f], row[pc]) for f in free] for row, pc in zip(red, pivots)]

    def finish(assign):
        z = [0] * k
        for f, t in zip(free, assign):
            z[f] = t
        for pc, c0, cf in zip(pivots, consts, coefs):
            val = c0 - sum(c * t for c, t in zip(cf, assign))
            if val.denominator != 1 or not 0 <= val <= bound:
                return None
            z[pc] = int(val)
        return tuple(z)

    if not free:
        z = finish(())
        if z is not None:
            yield z
        return
    for prefix in itertools.product(range(bound + 1), repeat=len(free) - 1):
        lo, hi = Fraction(0), Fraction(bound)
        for c0, cf in zip(consts, coefs):
            base = c0 - sum(c * t for c, t in zip(cf[:-1], prefix))
            c = cf[-1]
            # 0 <= base - c t <= bound
            if c == 0:
                if not 0 <= base <= bound:
                    lo, hi = Fraction(1), Fraction(0)
                    break
            elif c > 0:
                lo, hi = max(lo, (base - bound) / c), min(hi, base / c)
            else:
                lo, hi = max(lo, base / c), min(hi, (base - bound) / c)
        for t in range(math.ceil(lo), math.floor(hi) + 1):
            z = finish(prefix + (t,))
            if z is not None:
                yield z


def search_kernel_guided(pool: CandidatePool, D: DecompositionMatrix,
                         kernel_bound: int = DEFAULT_KERNEL_BOUND,
                         z_bound: int = DEFAULT_Z_BOUND, active: Sequence[int] | None = None,
                         all_hits: bool = False,
                         box_cap: int = MAX_BOX_POINTS) -> SearchResult:
    """For each candidate kernel vector v, solve (D^T D + sum z_L D^T Delta_L D) v = 0.

    Linearity in z turns singularity along v into the linear system
    sum z_L (D^T Delta_L D v) = -D^T D v over non-negative integers.
    """
    start = time.perf_counter()
    problem = _Problem(pool, D, active)
    settings = {"kernel_bound": kernel_bound, "z_bound": z_bound,
                "active": [c.name for c in problem.cands], "prime": D.prime}
    hits, seen, scanned = [], set(), 0
    m, k = problem.m, problem.k
    # at least k - m free variables, the last one swept by an interval
    if (z_bound + 1) ** max(k - m - 1, 0) > box_cap:
        raise SearchTooLarge(
            f"{k} active candidates against {m} equations leave at least {k - m} free "
            f"variables; (z_bound + 1)^{k - m - 1} exceeds {box_cap}; restrict the active "
            "candidates")
    if k == 0:
        if rank_rational(problem.gram) < m:
            raise InternalInconsistency("D^T D is singular; D lacks full column rank")
        scanned = sum(1 for _ in kernel_vectors(m, kernel_bound))
        return SearchResult("kernel", hits, scanned, time.perf_counter() - start, settings)
    for v in _feasible_kernel_vectors(problem, kernel_bound, z_bound):
        scanned += 1
        if v is None:  # ruled out by the interval filter
            continue
        cols = [[sum(P[i][j] * v[j] for j in range(m)) for i in range(m)]
                for P in problem.projected]
        rhs = [-sum(problem.gram[i][j] * v[j] for j in range(m)) for i in range(m)]
        A = [[cols[l][i] for l in range(k)] for i in range(m)]
        for z in bounded_nonnegative_solutions(A, rhs, z_bound):
            if z in seen:
                continue
            seen.add(z)
            if problem.complex_det(z) == 0:
                continue
            hit = problem.verify(z)
            if hit is None:
                raise InternalInconsistency(f"kernel route produced a non-singular z = {z}")
            hits.append(hit)
            if not all_hits:
                return SearchResult("kernel", hits, scanned, time.perf_counter() - start,
                                    settings)
    return SearchResult("kernel", hits, scanned, time.perf_counter() - start, settings)


def _feasible_kernel_vectors(problem: _Problem, kernel_bound: int, z_bound: int,
                             batch: int = 8192):
    """kernel_vectors in order, with None in place of vectors that cannot work.

    With 0 <= z_L <= z_bound, row i of sum z_L A_L lies between z_bound times
    the sum of the negative entries and z_bound times the sum of the positive
    ones; a right-hand side outside that range rules v out. The test is exact
    integer arithmetic, done in numpy batches.
    """
    P = np.array(problem.projected, dtype=object)
    big = max([abs(int(x)) for x in np.ravel(P)] + [abs(int(x)) for r in problem.gram for x in r]
              + [1])
    exact_int64 = big * problem.m * kernel_bound * (problem.k + 1) * max(z_bound, 1) < 2 ** 62
    P = P.astype(np.int64 if exact_int64 else object)
    gram = np.array(problem.gram, dtype=P.dtype)
    vectors = kernel_vectors(problem.m, kernel_bound)
    while True:
        chunk = list(itertools.islice(vectors, batch))
        if not chunk:
            return
        V = np.array(chunk, dtype=P.dtype)
        A = np.einsum("lij,nj->nil", P, V)          # A[n, i, l] = (P_l v_n)_i
        rhs = -(V @ gram.T)
        lo = z_bound * np.where(A < 0, A, 0).sum(axis=2)
        hi = z_bound * np.where(A > 0, A, 0).sum(axis=2)
        ok = ((rhs >= lo) & (rhs <= hi)).all(axis=1)
        for v, keep in zip(chunk, ok.tolist()):
            yield v if keep else None


# ---------------------------------------------------------------- verification

@dataclass
class Claim:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    claims: list[Claim]
    complex: CartanMatrix
    modular: CartanMatrix
    det_complex: int
    det_modular: int
    kernel: list[int] | None
    deltas: dict[str, DeltaMatrix]
    oracle_points: int | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def to_dict(self) -> dict:
        return {
            "status": "PASS" if self.passed else "FAIL",
            "claims": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                       for c in self.claims],
            "deltas": {k: {"labels": list(d.labels), "rows": d.tolist()}
                       for k, d in self.deltas.items()},
            "complex_cartan": self.complex.to_dict(),
            "modular_cartan": self.modular.to_dict(),
            "det_complex": self.det_complex,
            "det_modular": self.det_modular,
            "det_modular_mod_p": self.det_modular % self.modular.prime,
            "kernel_vector": self.kernel,
            "oracle_points": self.oracle_points,
            "seconds": round(self.seconds, 3),
        }


def verify_counterexample(G: PermGroup, subgroups: Sequence[PairSubgroup], z: Sequence[int],
                          D: DecompositionMatrix, table: CharacterTable | None = None,
                          oracle: bool = True, full_oracle: bool = False,
                          point_cap: int = DEFAULT_POINT_CAP,
                          threads: int = 1) -> VerificationReport:
    """Recompute Delta, both Cartan matrices and determinants from scratch.

    Delta(L) is computed from the character table and, when ``oracle`` is set
    and the coset space fits ``point_cap``, again from fixed-point counts on
    the explicit biset (G x G)/L. ``full_oracle`` also builds the whole biset
    X and compares its multiplicities with C - I. Any disagreement raises
    InternalInconsistency.
    """
    start = time.perf_counter()
    table = table or character_table(G)
    claims = []
    deltas = {}
    names = [L.name or f"L{i}" for i, L in enumerate(subgroups)]
    names = [n if names.count(n) == 1 else f"{n}#{i}" for i, n in enumerate(names)]
    for name, L in zip(names, subgroups):
        d = delta_matrix(table, L)
        deltas[name] = d
        dim = dimension_sum(d, table)
        expected = G.order ** 2 // L.order
        claims.append(Claim(f"dimension rule for Delta({name})", dim == expected,
                            f"{dim} vs |G|^2/|L| = {expected}"))
        if oracle and expected <= point_cap:
            route = oracle_matrix(build_biset(G, [L], cap=point_cap), table, threads)
            if route != d.tolist():
                raise InternalInconsistency(
                    f"Delta({name}) from characters {d.tolist()} != biset oracle {route}")
            claims.append(Claim(f"oracle agrees on Delta({name})", True,
                                f"{expected}-point coset biset"))
    C = complex_cartan(list(deltas.values()), z)
    Cm = modular_cartan(C, D)
    dc, dm = C.det(), Cm.det()
    oracle_points = None
    if full_oracle:
        try:
            X = build_biset(G, subgroups, z, cap=point_cap)
        except CapExceeded as exc:
            claims.append(Claim("full biset oracle", False, str(exc)))
        else:
            oracle_points = X.size
            route = oracle_matrix(X, table, threads)
            expected = [[C.entries[i][j] - int(i == j) for j in range(len(C.labels))]
                        for i in range(len(C.labels))]
            if route != expected:
                raise InternalInconsistency(
                    f"C - I = {expected} but the {X.size}-point biset gives {route}")
            claims.append(Claim("full biset oracle agrees with C - I", True,
                                f"{X.size} points"))
    claims.append(Claim("complex Cartan non-singular", dc != 0, f"det = {dc}"))
    claims.append(Claim("modular Cartan singular", dm == 0,
                        f"det = {dm} (mod {D.prime}: {dm % D.prime})"))
    return VerificationReport(claims, C, Cm, dc, dm, kernel_vector(Cm.entries), deltas,
                              oracle_points, time.perf_counter() - start)
