"""A complete small-scale NFS discrete-logarithm run in F_{p^n}.

Linear sieve polynomials a - b*x only, exhaustive (a, b) enumeration with
exact trial division, Galois-aware column reduction, dense elimination mod
ell, and individual logarithms by randomizing the target until its lift is
smooth.  Every answer can be cross-checked against baby-step giant-step.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import factorint, primerange

from .errors import (
    DomainError, InconsistentSystemError, InsufficientRelationsError, NeedMoreRelationsError,
    NfsError, OracleError, RandomizationExhaustedError,
)
from .galois import (
    PROJ, FracAutomorphism, PrimeIdeal, compute_kappa, hensel_root, orbit_partition,
)
from .mathcore import (
    FiniteField, ModPoly, degree, discriminant, lll_reduce, peval, poly_resultant, poly_roots_mod,
)
from .modlinalg import kernel_mod
from .schirokauer import SchirokauerMap, sm_evaluate

log = logging.getLogger(__name__)

RECIPROCAL = (0, 1, 1, 0)


def _is_reciprocal(s):
    return s is not None and (s.a, s.b, s.c, s.d) in (RECIPROCAL, (0, -1, -1, 0))


# ---------------------------------------------------------------------------
# factor base

@dataclass
class SideData:
    side: str
    poly: tuple
    ideals: list
    sigma: FracAutomorphism | None
    kappa: int | None
    orbits: list
    disc: int


@dataclass
class FactorBase:
    B: int
    F: SideData
    G: SideData
    special: frozenset  # (side, q) pairs needing care

    def side(self, s):
        return self.F if s == "F" else self.G

    @property
    def size(self):
        return len(self.F.ideals) + len(self.G.ideals)


def side_ideals(h, side, B):
    out = []
    for q in primerange(2, B + 1):
        red = tuple(c % q for c in h)
        if any(red):
            for r in sorted(poly_roots_mod(ModPoly(q, red))):
                out.append(PrimeIdeal(side, q, r))
        if h[-1] % q == 0:
            out.append(PrimeIdeal(side, q, PROJ))
    return out


def build_factor_base(pair, B: int, sigma: FracAutomorphism | None = None,
                      tau: FracAutomorphism | None = None) -> FactorBase:
    if B < 2:
        raise DomainError("B must be at least 2")
    sides = []
    for name, h, s in (("F", pair.f, sigma), ("G", pair.g, tau)):
        ideals = side_ideals(h, name, B)
        kappa = compute_kappa(pair, s, name) if s is not None and not s.is_identity() else None
        orbits = orbit_partition(ideals, s, h) if kappa is not None else \
            orbit_partition(ideals, FracAutomorphism(1, 0, 0, 1, 1), h)
        sides.append(SideData(name, tuple(h), ideals, s if kappa else None, kappa, orbits,
                              discriminant(h)))
    F, G = sides
    special = set()
    lcg = pair.g[-1] * pair.f[-1]
    for side in sides:
        for q in primerange(2, B + 1):
            if (lcg * F.disc * G.disc) % q == 0:
                special.add((side.side, q))
    return FactorBase(B, F, G, frozenset(special))


# ---------------------------------------------------------------------------
# relations

@dataclass
class Relation:
    a: int
    b: int
    valF: tuple  # ((PrimeIdeal, exponent), ...)
    valG: tuple
    smF: tuple = ()
    smG: tuple = ()


def homogeneous_values(h, A, B):
    """H(a, b) = sum h_i a^i b^(d-i) for arrays; int64 when safe, else object."""
    d = degree(h)
    E = max(int(np.max(np.abs(A))) if len(A) else 0, int(np.max(np.abs(B))) if len(B) else 0, 1)
    big = sum(abs(c) for c in h) * E ** d >= 1 << 62
    dt = object if big else np.int64
    A, B = A.astype(dt), B.astype(dt)
    acc = np.zeros(len(A), dtype=dt)
    for i, c in enumerate(h):
        acc = acc + c * A ** i * B ** (d - i)
    return acc


def _cofactor(vals, primes):
    rem = np.abs(vals)
    for q in primes:
        idx = np.nonzero(rem % q == 0)[0]
        while idx.size:
            rem[idx] //= q
            idx = idx[rem[idx] % q == 0]
    return rem


def _multiple_root_ok(h, q, root):
    """Whether v_q of the norm gives the ideal valuation at a multiple root class."""
    if discriminant(h) % (q * q):
        return True
    # totally ramified at the root: h(x + r) = lc x^d mod q, Eisenstein
    d = degree(h)
    if root == PROJ:
        t = tuple(reversed(h))
    else:
        t = [0] * (d + 1)
        # Taylor shift by root
        coeffs = list(h)
        for i in range(d + 1):
            t[i] = coeffs[i]
        for i in range(d):
            for j in range(d - 1, i - 1, -1):
                t[j] += root * t[j + 1]
    return t[-1] % q != 0 and all(c % q == 0 for c in t[:-1]) and t[0] % (q * q) != 0


def _ideal_of(h, q, a, b):
    if b % q == 0:
        return PROJ
    return a * pow(b, -1, q) % q


def side_valuations(h, side, a, b, value):
    """Factor value = H(a, b) into degree-one ideals, or None if unusable."""
    out = []
    v = abs(int(value))
    for q, e in sorted(factorint(v).items()):
        r = _ideal_of(h, q, a, b)
        if r != PROJ:
            x = r
            d1 = sum(i * c * pow(x, i - 1, q) for i, c in enumerate(h) if i) % q
            if d1 == 0 and not _multiple_root_ok(h, q, r):
                return None
        else:
            rev = tuple(reversed(h))
            d1 = rev[1] % q if len(rev) > 1 else 0
            if d1 == 0 and not _multiple_root_ok(h, q, PROJ):
                return None
        out.append((PrimeIdeal(side, q, r), e))
    return tuple(out)


def _keep_pair(a, b, reciprocal):
    if not reciprocal:
        return True
    return abs(a) <= b


def collect_relations(pair, fb: FactorBase, E: int, smF: SchirokauerMap | None = None,
                      smG: SchirokauerMap | None = None, target: int | None = None,
                      threads: int = 1, strict: bool = False):
    """All coprime (a, b), |a| <= E, 0 < b <= E, plus (1, 0), smooth on both sides.

    With the reciprocal automorphism on both sides, (b, a) is skipped when
    (a, b) is tested: its relation is the conjugate one.
    """
    if E < 1:
        raise DomainError("E must be at least 1")
    reciprocal = _is_reciprocal(fb.F.sigma) and _is_reciprocal(fb.G.sigma)
    bs, as_ = np.meshgrid(np.arange(1, E + 1, dtype=np.int64), np.arange(-E, E + 1, dtype=np.int64),
                          indexing="ij")
    A, Bv = as_.ravel(), bs.ravel()
    keep = np.gcd(A, Bv) == 1
    if reciprocal:
        keep &= np.abs(A) <= Bv
    A, Bv = A[keep], Bv[keep]
    if not reciprocal:
        A, Bv = np.concatenate([[1], A]), np.concatenate([[0], Bv])
    primes = list(primerange(2, fb.B + 1))

    def scan(lo, hi):
        a, b = A[lo:hi], Bv[lo:hi]
        vf = homogeneous_values(fb.F.poly, a, b)
        vg = homogeneous_values(fb.G.poly, a, b)
        ok = (vf != 0) & (vg != 0)
        idx = np.nonzero(ok)[0]
        cg = _cofactor(vg[idx], primes)
        idx = idx[cg == 1]
        cf = _cofactor(vf[idx], primes)
        idx = idx[cf == 1]
        return [(int(a[i]), int(b[i]), int(vf[i]), int(vg[i])) for i in idx]

    chunk = 1 << 18
    spans = [(i, min(i + chunk, len(A))) for i in range(0, len(A), chunk)]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as ex:
            found = [x for part in ex.map(lambda s: scan(*s), spans) for x in part]
    else:
        found = [x for s in spans for x in scan(*s)]
    found.sort(key=lambda t: (t[1], t[0]))
    rels, dropped = [], 0
    for a, b, vf, vg in found:
        valF = side_valuations(fb.F.poly, "F", a, b, vf)
        valG = side_valuations(fb.G.poly, "G", a, b, vg)
        if valF is None or valG is None:
            dropped += 1
            continue
        sf = tuple(sm_evaluate(smF, (a, -b))) if smF is not None and smF.r else ()
        sg = tuple(sm_evaluate(smG, (a, -b))) if smG is not None and smG.r else ()
        rels.append(Relation(a, b, valF, valG, sf, sg))
        if target is not None and len(rels) >= target:
            break
    log.info(f"relations: {len(rels)} kept, {dropped} dropped at index-divisor primes")
    if strict and target is not None and len(rels) < target:
        raise InsufficientRelationsError(f"only {len(rels)} of {target} relations", len(rels))
    return rels


# ---------------------------------------------------------------------------
# relation and log-table files

def _fmt_side(val):
    parts = []
    for I, e in val:
        parts.append(f"{I.q:x}^{e}")
    return ",".join(parts)


def format_relation(rel: Relation) -> str:
    sf = ",".join(str(x) for x in rel.smF)
    sg = ",".join(str(x) for x in rel.smG)
    return f"{rel.a},{rel.b}:{_fmt_side(rel.valF)}:{_fmt_side(rel.valG)}:{sf}:{sg}"


def parse_relation(line: str, f, g) -> Relation:
    try:
        ab, sf, sg, smf, smg = line.strip().split(":")
        a, b = (int(x) for x in ab.split(","))
    except ValueError as exc:
        raise DomainError(f"malformed relation line {line!r}") from exc

    def side(text, h, name):
        out = []
        for tok in filter(None, text.split(",")):
            q, _, e = tok.partition("^")
            q = int(q, 16)
            out.append((PrimeIdeal(name, q, _ideal_of(h, q, a, b)), int(e)))
        return tuple(out)

    nums = lambda t: tuple(int(x) for x in filter(None, t.split(",")))
    return Relation(a, b, side(sf, f, "F"), side(sg, g, "G"), nums(smf), nums(smg))


def write_relations(rels, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in rels:
            fh.write(format_relation(r) + "\n")


def read_relations(path, f, g):
    with open(path, encoding="utf-8") as fh:
        return [parse_relation(line, f, g) for line in fh if line.strip()]


# ---------------------------------------------------------------------------
# filtering

J_COLUMN = ("G", 0, "J")


def _label(I: PrimeIdeal):
    return (I.side, I.q, I.r)


@dataclass
class MatrixInstance:
    ell: int
    columns: list  # labels
    rows: list  # dict column index -> coefficient mod ell
    relations: list  # Relation per row
    ideal_map: dict  # label -> (label of representative column, multiplier) or None for log 0
    removed_rows: list = field(default_factory=list)
    sm_columns: int = 0

    @property
    def shape(self):
        return len(self.rows), len(self.columns)

    @property
    def avg_weight(self):
        return sum(len(r) for r in self.rows) / max(len(self.rows), 1)


def ideal_map_for(fb: FactorBase, p: int, ell: int, galois: bool = True):
    """label -> (representative label, multiplier) or None (log forced to 0)."""
    mapping = {}
    for sd in (fb.F, fb.G):
        if not galois or sd.kappa is None:
            for I in sd.ideals:
                mapping[_label(I)] = (_label(I), 1)
            continue
        A = pow(p, sd.kappa, ell)
        for o in sd.orbits:
            rep = _label(o.representative)
            if o.fixed_by and pow(A, o.fixed_by, ell) != 1:
                for I, _ in o.members:
                    mapping[_label(I)] = None
                continue
            for I, k in o.members:
                mapping[_label(I)] = (rep, pow(A, k, ell))
    return mapping


def _row_of(rel, mapping, ell, nonmonic_g):
    row = {}
    ok = True

    def add(label, c):
        row[label] = (row.get(label, 0) + c) % ell

    for I, e in rel.valF:
        m = mapping.get(_label(I), False)
        if m is False:
            ok = False
        elif m is not None:
            add(m[0], e * m[1])
    for I, e in rel.valG:
        m = mapping.get(_label(I), False)
        if m is False:
            ok = False
        elif m is not None:
            add(m[0], -e * m[1])
    if nonmonic_g:
        add(J_COLUMN, 1)
    for i, v in enumerate(rel.smF):
        add(("SM", "F", i), v)
    for i, v in enumerate(rel.smG):
        add(("SM", "G", i), -v)
    return ({k: v for k, v in row.items() if v}, ok)


def filter_relations(rels, fb: FactorBase, p: int, ell: int, galois: bool = True) -> MatrixInstance:
    """Rewrite onto orbit representatives, drop duplicate rows and singleton columns."""
    mapping = ideal_map_for(fb, p, ell, galois)
    nonmonic = fb.G.poly[-1] != 1
    rows, kept, removed = [], [], []
    seen = set()
    for rel in rels:
        row, ok = _row_of(rel, mapping, ell, nonmonic)
        key = tuple(sorted(row.items(), key=lambda kv: str(kv[0])))
        if not ok or not row or key in seen:
            removed.append(rel)
            continue
        seen.add(key)
        rows.append(row)
        kept.append(rel)
    # singleton removal
    while True:
        count = {}
        for row in rows:
            for c in row:
                count[c] = count.get(c, 0) + 1
        singles = {c for c, k in count.items() if k == 1}
        if not singles:
            break
        nr, nk = [], []
        for row, rel in zip(rows, kept):
            if singles.intersection(row):
                removed.append(rel)
            else:
                nr.append(row)
                nk.append(rel)
        rows, kept = nr, nk
    cols = sorted({c for row in rows for c in row}, key=_col_key)
    index = {c: i for i, c in enumerate(cols)}
    rows = [{index[c]: v for c, v in row.items()} for row in rows]
    smc = sum(1 for c in cols if c[0] == "SM")
    inst = MatrixInstance(ell, cols, rows, kept, mapping, removed, smc)
    log.info(f"filtered matrix {inst.shape[0]} x {inst.shape[1]}, weight {inst.avg_weight:.2f}")
    return inst


def _col_key(c):
    side, q, r = c
    if side == "SM":
        return (2, q, r, 0)
    if r == "J":
        return (1, "", 0, 0)
    return (0, side, q, q if r == PROJ else r)


# ---------------------------------------------------------------------------
# linear algebra

@dataclass
class VirtualLogTable:
    ell: int
    p: int
    entries: dict  # column label -> residue
    smLogs: dict
    mapping: dict
    reference: tuple

    def vlog(self, I: PrimeIdeal):
        m = self.mapping.get(_label(I), False)
        if m is None:
            return 0
        if m is False or m[0] not in self.entries:
            raise KeyError(I)
        return self.entries[m[0]] * m[1] % self.ell

    def known(self, I: PrimeIdeal) -> bool:
        try:
            self.vlog(I)
            return True
        except KeyError:
            return False

    @property
    def jlog(self):
        return self.entries.get(J_COLUMN, 0)


def _dense(rows, ncols, ell):
    M = np.zeros((len(rows), ncols), dtype=np.int64 if ell < 1 << 31 else object)
    for i, row in enumerate(rows):
        for j, v in row.items():
            M[i, j] = v
    return M


def row_value(row_labels: dict, entries: dict, ell: int):
    return sum(v * entries[c] for c, v in row_labels.items()) % ell


def solve_virtual_logs(inst: MatrixInstance, ell: int | None = None, holdout: float = 0.1,
                       seed: int = 0, reference=None) -> tuple:
    """Kernel vector of the relation matrix; returns (table, holdout residuals)."""
    ell = ell or inst.ell
    rng = random.Random(seed)
    n_rows, n_cols = inst.shape
    order = list(range(n_rows))
    rng.shuffle(order)
    if n_cols == 0 or n_rows < n_cols - 1:
        raise NeedMoreRelationsError(f"{n_rows} rows for {n_cols} columns",
                                     max(n_cols - n_rows, 1))
    # shrink the held-out set if it costs rank
    n_hold = max(0, min(int(round(holdout * n_rows)), n_rows - n_cols + 1))
    while True:
        hold, train = sorted(order[:n_hold]), sorted(order[n_hold:])
        ker = kernel_mod(_dense([inst.rows[i] for i in train], n_cols, ell), ell, n_cols)
        if len(ker) <= 1 or n_hold == 0:
            break
        n_hold //= 2
    if len(ker) == 0:
        raise InconsistentSystemError("trivial kernel: the relations are inconsistent")
    if len(ker) > 1:
        raise NeedMoreRelationsError(f"kernel of dimension {len(ker)}", len(ker))
    vec = ker[0]
    cols = inst.columns
    if reference is None:
        cands = [j for j, c in enumerate(cols) if c[0] == "G" and c[2] != "J" and vec[j]]
        cands += [j for j, c in enumerate(cols) if vec[j]]
        ref = cands[0]
    else:
        ref = cols.index(reference)
        if vec[ref] == 0:
            raise DomainError("reference column has log 0")
    scale = pow(vec[ref], -1, ell)
    entries = {c: v * scale % ell for c, v in zip(cols, vec)}
    residuals = [sum(v * entries[cols[j]] for j, v in inst.rows[i].items()) % ell for i in hold]
    sm = {c: v for c, v in entries.items() if c[0] == "SM"}
    table = VirtualLogTable(ell, 0, entries, sm, inst.ideal_map, cols[ref])
    return table, residuals


def complete_table(table: VirtualLogTable, rels, ell: int):
    """Recover logs of columns absent from the matrix from relations with one unknown."""
    changed = True
    while changed:
        changed = False
        for rel in rels:
            row, ok = _row_of(rel, table.mapping, ell, J_COLUMN in table.entries)
            if not ok:
                continue
            unknown = [c for c in row if c not in table.entries]
            if len(unknown) != 1:
                continue
            u = unknown[0]
            rest = sum(v * table.entries[c] for c, v in row.items() if c != u) % ell
            table.entries[u] = -rest * pow(row[u], -1, ell) % ell
            changed = True
    return table


def format_log_table(table: VirtualLogTable) -> str:
    lines = []
    for (side, q, r), v in sorted(table.entries.items(), key=lambda kv: _col_key(kv[0])):
        if side == "SM":
            lines.append(f"SM{q} {r} - {v}")
        else:
            lines.append(f"{side} {q} {'proj' if r == PROJ else r} {v}")
    return "\n".join(lines) + "\n"


def parse_log_table(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        side, q, r, v = line.split()
        if side.startswith("SM"):
            out[("SM", side[2:], int(q))] = int(v)
            continue
        r = PROJ if r == "proj" else ("J" if r == "J" else int(r))
        out[(side, int(q), r)] = int(v)
    return out


# ---------------------------------------------------------------------------
# individual logarithms

def bsgs_oracle(p: int, n: int, ell: int, base, target, phi) -> int:
    """log of target^h in base base^h, h = (p^n - 1)/ell, by baby-step giant-step."""
    if ell > 1 << 40:
        raise OracleError("ell too large for the oracle")
    K = FiniteField(p, phi)
    order = K.order - 1
    if order % ell:
        raise OracleError("ell does not divide p^n - 1")
    h = order // ell
    g = K.pow(K.elt(base), h)
    t = K.pow(K.elt(target), h)
    if g == K.one():
        raise OracleError("base has no component of order ell")
    m = math.isqrt(ell) + 1
    baby = {}
    cur = K.one()
    for j in range(m):
        baby.setdefault(cur, j)
        cur = K.mul(cur, g)
    giant = K.inv(K.pow(g, m))
    cur = t
    for i in range(m + 1):
        if cur in baby:
            return (i * m + baby[cur]) % ell
        cur = K.mul(cur, giant)
    raise OracleError("target is outside the subgroup generated by the base")


def babai_nearest(rows, target):
    """Lattice vector close to target (nearest plane on an LLL-reduced basis)."""
    basis = lll_reduce(rows)
    gs = []
    for b in basis:
        v = [Fraction(x) for x in b]
        for u in gs:
            mu = sum(x * y for x, y in zip(v, u)) / sum(y * y for y in u)
            v = [x - mu * y for x, y in zip(v, u)]
        gs.append(v)
    t = [Fraction(x) for x in target]
    out = [0] * len(target)
    for b, u in zip(reversed(basis), reversed(gs)):
        c = round(sum(x * y for x, y in zip(t, u)) / sum(y * y for y in u))
        t = [x - c * y for x, y in zip(t, b)]
        out = [x + c * y for x, y in zip(out, b)]
    return out


def lift_element(z, phi, p, d):
    """Short h in Z[x], deg h < d, with h = z mod (p, phi): nearest plane in the lattice."""
    n = len(phi) - 1
    rows = []
    for i in range(n):
        rows.append([p if j == i else 0 for j in range(d)])
    for k in range(d - n):
        rows.append([phi[j - k] if 0 <= j - k <= n else 0 for j in range(d)])
    target = list(z) + [0] * (d - len(z))
    v = babai_nearest(rows, target)
    return tuple(t - x for t, x in zip(target, v))


def element_valuations(f, gamma, B, side="F"):
    """Valuations of gamma in Z[alpha] at degree-one ideals of norm <= B, or None."""
    N = abs(poly_resultant(f, gamma)) // abs(f[-1]) ** degree(gamma) if f[-1] != 1 else \
        abs(poly_resultant(f, gamma))
    if N == 0:
        return None
    out = []
    disc = discriminant(f)
    for q, e in sorted(factorint(N, limit=B + 1).items()):
        if q > B:
            return None
        red = tuple(c % q for c in f)
        roots = sorted(poly_roots_mod(ModPoly(q, red)))
        if disc % q == 0:
            simple = [r for r in roots
                      if sum(i * c * pow(r, i - 1, q) for i, c in enumerate(f) if i) % q]
            multiple = [r for r in roots if r not in simple]
            hit = [r for r in multiple if peval(gamma, r) % q == 0]
            if hit:
                if len(roots) == 1 and _multiple_root_ok(f, q, roots[0]):
                    out.append((PrimeIdeal(side, q, roots[0]), e))
                    continue
                return None
            roots = simple
        total = 0
        for r in roots:
            v = _root_valuation(f, gamma, q, r, e)
            if v:
                out.append((PrimeIdeal(side, q, r), v))
                total += v
        if total != e:
            return None
    return tuple(out)


def _root_valuation(f, gamma, q, r, cap):
    root = hensel_root(f, r, q, cap + 1)
    val = peval(gamma, root) % q ** (cap + 1)
    v = 0
    while v < cap and val % q == 0:
        val //= q
        v += 1
    return v


def _lift_log(pair, table, fb, zelt, d, smF=None):
    gamma = lift_element(zelt, pair.phi, pair.p, d)
    vals = element_valuations(pair.f, gamma, fb.B)
    if vals is None:
        return None
    try:
        s = sum(e * table.vlog(I) for I, e in vals)
    except KeyError:
        return None
    if smF is not None and smF.r:
        try:
            lam = sm_evaluate(smF, gamma)
        except NfsError:
            return None
        s += sum(v * table.smLogs.get(("SM", "F", i), 0) for i, v in enumerate(lam))
    return s % table.ell


def raw_log(pair, table, fb, z, genG, E_rand: int = 2000, seed: int = 0, mode: str = "mul",
            smF=None):
    """Unnormalized L(z) with L(genG^e z) = L(z) + e L(genG) for a smooth lift."""
    K = FiniteField(pair.p, pair.phi)
    ell = table.ell
    rng = random.Random(seed)
    z, G = K.elt(z), K.elt(genG)
    d = degree(pair.f)
    for tries in range(1, E_rand + 1):
        e = rng.randrange(1, ell)
        if mode == "mul":
            w = K.mul(z, K.pow(G, e))
        else:
            w = K.pow(z, e)
        s = _lift_log(pair, table, fb, w, d, smF)
        if s is None:
            continue
        if mode == "mul":
            return s, e, tries
        return s * pow(e, -1, ell) % ell, 0, tries
    raise RandomizationExhaustedError(f"no smooth lift in {E_rand} tries", E_rand)


def log_of_generator(pair, table, fb, genG, E_rand=2000, seed=0, smF=None):
    s, e, _ = raw_log(pair, table, fb, genG, genG, E_rand, seed, smF=smF)
    if (1 + e) % table.ell == 0:
        return log_of_generator(pair, table, fb, genG, E_rand, seed + 1, smF)
    return s * pow(1 + e, -1, table.ell) % table.ell


def individual_log(pair, table: VirtualLogTable, fb: FactorBase, z, genG, E_rand: int = 2000,
                   seed: int = 0, mode: str = "mul", LG: int | None = None,
                   smF: SchirokauerMap | None = None) -> int:
    """log of z in base genG, modulo ell.

    The lift of z*genG^e (mode "mul") or z^e (mode "pow") to Z[x] is
    re-randomized until it factors over the factor base; no descent.
    """
    if not FiniteField(pair.p, pair.phi).elt(z):
        raise DomainError("z must be nonzero")
    ell = table.ell
    if LG is None:
        LG = log_of_generator(pair, table, fb, genG, E_rand, seed, smF)
    if LG == 0:
        raise DomainError("generator has log 0; choose another")
    s, e, _ = raw_log(pair, table, fb, z, genG, E_rand, seed + 7919, mode, smF)
    return (s - e * LG) * pow(LG, -1, ell) % ell


# ---------------------------------------------------------------------------
# toy parameter helpers

def toy_ell(p: int, n: int, f, g, minimum: int = 101) -> int:
    """Largest prime ell | Phi_n(p) with ell >= minimum, prime to 6 disc(f) disc(g) (p - 1)."""
    from sympy import cyclotomic_poly
    val = int(cyclotomic_poly(n, p))
    bad = 6 * discriminant(f) * discriminant(g) * (p - 1)
    cands = [q for q in factorint(val) if q >= minimum and bad % q]
    if not cands:
        raise DomainError("no suitable ell")
    return max(cands)


def subgroup_generator(pair, ell, start=1):
    """Smallest x + c whose (p^n - 1)/ell power is not 1."""
    K = FiniteField(pair.p, pair.phi)
    h = (K.order - 1) // ell
    for c in range(start, pair.p):
        z = K.elt([c, 1])
        if K.pow(z, h) != K.one():
            return z
    raise DomainError("no generator found")


@dataclass
class ToyRun:
    pair: object
    ell: int
    fb: FactorBase
    relations: list
    matrix: MatrixInstance
    table: VirtualLogTable
    holdout: list
    generator: tuple
    LG: int


def toy_pair(p: int, bound: int = 12):
    """Conjugation pair over F_{p^2} with f = x^4 + 1 and g free of real roots."""
    from .polyselect import conj_second_vector, improve_linear_combination, select_conjugation
    pair = select_conjugation(p, 2)
    g = pair.g
    if g[1] * g[1] - 4 * g[0] * g[2] >= 0:
        pair = improve_linear_combination(pair, conj_second_vector(pair), bound=bound,
                                          totally_complex=True)
    return pair


def common_automorphism(pair):
    """First nontrivial automorphism of f that g also admits and that descends to F_{p^n}."""
    from .galois import admits, find_automorphisms
    for s in find_automorphisms(pair.f):
        if not admits(pair.g, s):
            continue
        try:
            compute_kappa(pair, s, "F")
        except NfsError:
            continue
        return s
    return None


def holdout_residuals(table: VirtualLogTable, rels, ell: int):
    """Row values of relations left out of the solve; all must be 0 mod ell."""
    out = []
    for rel in rels:
        row, ok = _row_of(rel, table.mapping, ell, J_COLUMN in table.entries)
        if ok and all(c in table.entries for c in row):
            out.append(row_value(row, table.entries, ell))
    return out


def _solve_with_holdout(rels, fb, p, ell, galois, holdout, seed):
    """Hold out a fraction of the relations, solve on the rest, check the held-out ones.

    The fraction is halved while the training set leaves a kernel of dimension > 1.
    """
    order = list(range(len(rels)))
    random.Random(seed).shuffle(order)
    k = int(round(holdout * len(rels)))
    while True:
        held = set(order[:k])
        train = [r for i, r in enumerate(rels) if i not in held]
        inst = filter_relations(train, fb, p, ell, galois)
        try:
            table, _ = solve_virtual_logs(inst, ell, holdout=0.0, seed=seed)
            break
        except NeedMoreRelationsError:
            if k == 0:
                raise
            k //= 2
    if k < int(round(holdout * len(rels))):
        log.info(f"holdout reduced to {k} relations")
    complete_table(table, train, ell)
    hold = holdout_residuals(table, [rels[i] for i in sorted(held)], ell)
    return inst, table, hold


def run_pipeline(pair, B: int = 2000, E: int = 1000, ell: int | None = None, galois: bool = True,
                 seed: int = 0, threads: int = 1, sigma="auto", holdout: float = 0.1) -> ToyRun:
    """Factor base, relations, filtering, linear algebra and the generator's log."""
    p = pair.p
    if ell is None:
        ell = toy_ell(p, pair.n, pair.f, pair.g)
    else:
        from sympy import cyclotomic_poly, isprime
        if not isprime(ell) or int(cyclotomic_poly(pair.n, p)) % ell:
            raise DomainError(f"ell = {ell} is not a prime divisor of Phi_{pair.n}(p)")
    if sigma == "auto":
        sigma = common_automorphism(pair)
    sigma = sigma if galois else None
    fb = build_factor_base(pair, B, sigma, sigma)
    rels = collect_relations(pair, fb, E, threads=threads)
    inst, table, hold = _solve_with_holdout(rels, fb, p, ell, galois and sigma is not None,
                                            holdout, seed)
    table.p = p
    complete_table(table, rels, ell)
    G = subgroup_generator(pair, ell)
    LG = log_of_generator(pair, table, fb, G, seed=seed)
    return ToyRun(pair, ell, fb, rels, inst, table, hold, G, LG)


def run_toy(p: int, B: int = 2000, E: int = 1000, galois: bool = True, seed: int = 0,
            threads: int = 1, ell: int | None = None, pair=None) -> ToyRun:
    """run_pipeline on the conjugation pair (x^4 + 1, g) of F_{p^2}."""
    pair = pair or toy_pair(p)
    return run_pipeline(pair, B, E, ell, galois, seed, threads)
