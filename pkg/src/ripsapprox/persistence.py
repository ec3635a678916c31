"""Barcodes over GF(2): exact Rips filtrations, Betti numbers, and
barcodes of towers with contractions.

Reduced homology throughout: a dummy (-1)-cell augments the complex, so
a single point has trivial homology in every dimension and dimension-0
barcodes omit the one essential component.

Barcode text format: one line `p birth death` per interval (death `inf`
for essential classes), sorted by (p, birth, death), 17 significant
digits.
"""

from __future__ import annotations

import itertools
import math
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .barycentric import SimplicialComplex
from .cubical import CubicalComplex, cubical_boundary
from .geometry import PointCloud, METRICS
from .lattice import facets
from .tower import Contract, EventStream, GuardrailExceeded, Include, MalformedStream, Scale, Snapshot

__all__ = [
    "Filtration",
    "Barcode",
    "rips_filtration",
    "reduce",
    "betti",
    "tower_barcode",
    "coning_oracle",
]

INF = math.inf


def _fmt_g17(x: float) -> str:
    return "inf" if x == INF else "%.17g" % (x,)


class Barcode:
    """Per homology dimension, a multiset of [birth, death) intervals."""

    def __init__(self, intervals: Optional[Dict[int, List[Tuple[float, float]]]] = None):
        self._ivals: Dict[int, List[Tuple[float, float]]] = {}
        if intervals:
            for p, lst in intervals.items():
                self._ivals[p] = sorted(lst)

    def add(self, p: int, birth: float, death: float) -> None:
        self._ivals.setdefault(p, []).append((birth, death))

    def sort(self) -> None:
        for p in self._ivals:
            self._ivals[p].sort()

    def dimensions(self) -> List[int]:
        return sorted(p for p in self._ivals if self._ivals[p])

    def intervals(self, p: int) -> List[Tuple[float, float]]:
        return list(self._ivals.get(p, []))

    def total(self) -> int:
        return sum(len(v) for v in self._ivals.values())

    def scaled(self, factor: float) -> "Barcode":
        if factor <= 0:
            raise ValueError("factor must be positive")
        out = Barcode()
        for p, lst in self._ivals.items():
            for b, d in lst:
                out.add(p, b * factor, d if d == INF else d * factor)
        out.sort()
        return out

    def to_text(self) -> str:
        lines = []
        for p in self.dimensions():
            for b, d in self._ivals[p]:
                lines.append("%d %s %s" % (p, _fmt_g17(b), _fmt_g17(d)))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def parse(cls, text: str) -> "Barcode":
        out = cls()
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError("line %d: expected 'p birth death'" % lineno)
            p = int(parts[0])
            b = float(parts[1])
            d = INF if parts[2] == "inf" else float(parts[2])
            out.add(p, b, d)
        out.sort()
        return out

    def __eq__(self, other):
        if not isinstance(other, Barcode):
            return NotImplemented
        dims = set(self.dimensions()) | set(other.dimensions())
        return all(self.intervals(p) == other.intervals(p) for p in dims)

    def __repr__(self):
        parts = ["%d:%d" % (p, len(self._ivals[p])) for p in self.dimensions()]
        return "Barcode(%s)" % ", ".join(parts)


class Filtration:
    """Ordered simplices (vertex-id tuples) with non-decreasing values."""

    def __init__(self, simplices: Sequence[Tuple[float, Tuple[int, ...]]]):
        self.simplices = list(simplices)
        prev = -INF
        for v, _ in self.simplices:
            if v < prev:
                raise ValueError("filtration values decrease")
            prev = v

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)


def rips_filtration(P: PointCloud, metric="linf", k: int = 1,
                    max_simplices: Optional[int] = 10_000_000) -> Filtration:
    """All simplices of dimension <= k+1 with value diam/2.

    One dimension above the homology cap so that deaths in dimension k
    come out right. Order: value, then dimension, then vertex ids.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    n = P.n
    top = min(k + 2, n)
    count = sum(math.comb(n, r) for r in range(1, top + 1))
    if max_simplices is not None and count > max_simplices:
        raise GuardrailExceeded("Rips filtration needs %d simplices > %d" % (count, max_simplices))
    dm = P.pairwise_distances(metric)
    out = []
    for r in range(1, top + 1):
        for combo in itertools.combinations(range(n), r):
            if r == 1:
                val = 0.0
            else:
                val = max(dm[a][b] for a, b in itertools.combinations(combo, 2)) / 2.0
            out.append((val, combo))
    out.sort(key=lambda t: (t[0], len(t[1]), t[1]))
    return Filtration(out)


# ---------------------------------------------------------------------------
# column reduction


def _reduce_cells(cells: Sequence[Tuple[float, int, List[int]]], homology_cap: Optional[int] = None):
    """Reduce an ordered cell complex; return index pairs (p, bj, dj).

    `cells[j] = (value, dim, face_indices)`; 0-cells take the dummy
    augmentation row, so the output is reduced homology. dj is None for
    essential classes. Index pairs keep prefix counting exact under
    value ties; callers map indices to values.
    """
    cols: List[int] = []
    alive: Dict[int, int] = {}
    pair_of_row: Dict[int, int] = {}
    intervals = []
    for j, (val, dim, faces) in enumerate(cells):
        col = 1 if dim == 0 else 0  # bit 0 is the dummy row
        for fi in faces:
            col |= 1 << (fi + 1)
        while col:
            low = col.bit_length() - 1
            owner = pair_of_row.get(low)
            if owner is None:
                break
            col ^= cols[owner]
        cols.append(col)
        if col == 0:
            alive[j] = dim
        else:
            low = col.bit_length() - 1
            pair_of_row[low] = j
            if low > 0:
                bj = low - 1
                if bj in alive:
                    del alive[bj]
                intervals.append((cells[bj][1], bj, j))
            # low == 0 pairs the first 0-cell with the dummy cell: that is
            # the reduced-homology convention eating one component class
    for j, dim in alive.items():
        intervals.append((dim, j, None))
    if homology_cap is not None:
        intervals = [iv for iv in intervals if iv[0] <= homology_cap]
    return intervals


def _cells_from_simplices(simplices: Sequence[Tuple[float, Tuple[int, ...]]]):
    """Cell list with face indices for an ordered simplex filtration."""
    index: Dict[Tuple[int, ...], int] = {}
    cells = []
    for j, (val, verts) in enumerate(simplices):
        verts = tuple(sorted(verts))
        if verts in index:
            raise ValueError("simplex %r appears twice" % (verts,))
        if len(verts) == 1:
            faces: List[int] = []
        else:
            try:
                faces = [index[verts[:i] + verts[i + 1:]] for i in range(len(verts))]
            except KeyError:
                raise ValueError("face of %r missing from filtration prefix" % (verts,))
        index[verts] = j
        cells.append((val, len(verts) - 1, faces))
    return cells


def reduce(filtration, homology_cap: Optional[int] = None) -> Barcode:
    """Reduced-homology barcode of a filtration; zero-length intervals dropped.

    Accepts a Filtration or a plain list of (value, vertex-tuple). The
    cap defaults to one below the top cell dimension present, matching a
    Rips filtration built with one extra dimension.
    """
    simplices = list(filtration)
    cells = _cells_from_simplices(simplices)
    if homology_cap is None:
        top = max((c[1] for c in cells), default=0)
        homology_cap = max(top - 1, 0)
    out = Barcode()
    for p, bj, dj in _reduce_cells(cells, homology_cap):
        b = cells[bj][0]
        d = INF if dj is None else cells[dj][0]
        if d == INF or d > b:
            out.add(p, b, d)
    out.sort()
    return out


def _betti_from_cells(cells) -> List[int]:
    maxdim = max((c[1] for c in cells), default=-1)
    if maxdim < 0:
        return []
    counts = [0] * (maxdim + 1)
    for p, bj, dj in _reduce_cells(cells):
        if dj is None:
            counts[p] += 1
    return counts


def betti(obj) -> List[int]:
    """Reduced Betti numbers per dimension.

    Accepts a CubicalComplex, an order SimplicialComplex, a replayed
    Snapshot, or any iterable of simplex vertex-tuples.
    """
    if isinstance(obj, CubicalComplex):
        faces = obj.faces()
        index = {f: i for i, f in enumerate(faces)}
        cells = []
        for f in faces:
            if f.dim == 0:
                cells.append((0.0, 0, []))
            else:
                cells.append((0.0, f.dim, [index[g] for g in facets(f)]))
        return _betti_from_cells(cells)
    if isinstance(obj, SimplicialComplex):
        simplices = obj.all_simplices()
    elif isinstance(obj, Snapshot):
        if obj.mode != "simplicial":
            raise ValueError("betti of a snapshot needs a simplicial stream")
        simplices = sorted(tuple(sorted(c)) for c in obj.cells)
    else:
        simplices = [tuple(sorted(t)) for t in obj]
    simplices = sorted(set(simplices), key=lambda t: (len(t), t))
    cells = _cells_from_simplices([(0.0, t) for t in simplices])
    return _betti_from_cells(cells)


# ---------------------------------------------------------------------------
# tower persistence via the rank formula


def _stream_scale_states(stream: EventStream):
    """Per present scale: (alpha, parent snapshot, number of raw cells)."""
    if stream.mode != "simplicial":
        raise MalformedStream("tower persistence needs a simplicial stream")
    parent: Dict[int, int] = {}
    raw: List[Tuple[int, ...]] = []
    states = []
    alpha = None

    def flush():
        if alpha is not None:
            states.append((alpha, dict(parent), len(raw)))

    for e in stream.events:
        if isinstance(e, Scale):
            flush()
            alpha = e.alpha
        elif isinstance(e, Contract):
            parent[e.j] = e.i
        else:
            raw.append((e.id,) if e.dim == 0 else e.vertices)
    flush()
    return raw, states


def _resolve(parent: Dict[int, int], v: int) -> int:
    while v in parent:
        v = parent[v]
    return v


def _rank_of(vectors: List[int]) -> int:
    pivots: Dict[int, int] = {}
    r = 0
    for vec in vectors:
        while vec:
            low = vec.bit_length() - 1
            if low in pivots:
                vec ^= pivots[low]
            else:
                pivots[low] = vec
                r += 1
                break
    return r


def _pivot_basis(vectors: Iterable[int]) -> Dict[int, int]:
    pivots: Dict[int, int] = {}
    for vec in vectors:
        while vec:
            low = vec.bit_length() - 1
            if low in pivots:
                vec ^= pivots[low]
            else:
                pivots[low] = vec
                break
    return pivots


def _snapshot_complex(raw, parent, nraw):
    cells: Set[frozenset] = set()
    for verts in raw[:nraw]:
        cells.add(frozenset(_resolve(parent, v) for v in verts))
    by_dim: Dict[int, List[Tuple[int, ...]]] = {}
    for c in cells:
        by_dim.setdefault(len(c) - 1, []).append(tuple(sorted(c)))
    for p in by_dim:
        by_dim[p].sort()
    return by_dim


def _homology_basis(by_dim, p: int):
    """Cycle representatives spanning reduced H_p, plus the boundary pivots.

    Vectors are bitmasks over the sorted p-simplex list. For p = 0 the
    augmentation row makes the kernel the even vertex sets.
    """
    p_cells = by_dim.get(p, [])
    idx_p = {c: i for i, c in enumerate(p_cells)}
    if not p_cells:
        return [], {}
    # boundary image from above
    bvecs = []
    for c in by_dim.get(p + 1, []):
        vec = 0
        for i in range(len(c)):
            face = tuple(sorted(c[:i] + c[i + 1:]))
            vec ^= 1 << idx_p[face]
        bvecs.append(vec)
    bpivots = _pivot_basis(bvecs)
    # kernel of the boundary going down (augmented at p = 0)
    if p == 0:
        pm1_idx = {}
    else:
        pm1_idx = {c: i for i, c in enumerate(by_dim.get(p - 1, []))}
    dpivots: Dict[int, int] = {}
    dcombo: Dict[int, int] = {}
    kernel = []
    for j, c in enumerate(p_cells):
        if p == 0:
            vec = 1
        else:
            vec = 0
            for i in range(len(c)):
                face = tuple(sorted(c[:i] + c[i + 1:]))
                vec ^= 1 << pm1_idx[face]
        combo = 1 << j
        while vec:
            low = vec.bit_length() - 1
            if low in dpivots:
                vec ^= dpivots[low]
                combo ^= dcombo[low]
            else:
                dpivots[low] = vec
                dcombo[low] = combo
                break
        if vec == 0:
            kernel.append(combo)
    basis = []
    combined = dict(bpivots)
    for z in kernel:
        v = z
        while v:
            low = v.bit_length() - 1
            if low in combined:
                v ^= combined[low]
            else:
                combined[low] = v
                basis.append(v)
                break
    return basis, bpivots


def _push_vector(vec: int, src_cells, dst_index, parent_next) -> int:
    """Apply the scale-step chain map to a cycle vector."""
    out = 0
    i = 0
    while vec:
        if vec & 1:
            cell = src_cells[i]
            img = frozenset(_resolve(parent_next, v) for v in cell)
            if len(img) == len(cell):
                out ^= 1 << dst_index[tuple(sorted(img))]
        vec >>= 1
        i += 1
    return out


def tower_barcode(stream: EventStream, k: Optional[int] = None) -> Barcode:
    """Barcode of a simplicial tower stream via composite ranks.

    Snapshots are taken at every scale event; intervals use the
    piecewise-constant convention [alpha_i, alpha_{j+1}), with classes
    alive at the first snapshot born at 0 (the complex is unchanged
    below the first scale).
    """
    if k is None:
        k = stream.k
    k = min(k, stream.k)
    raw, states = _stream_scale_states(stream)
    T = len(states)
    if T == 0:
        return Barcode()
    alphas = [st[0] for st in states]
    complexes = [_snapshot_complex(raw, st[1], st[2]) for st in states]

    out = Barcode()
    for p in range(k + 1):
        bases = []
        bpiv = []
        for t in range(T):
            basis, piv = _homology_basis(complexes[t], p)
            bases.append(basis)
            bpiv.append(piv)
        # cell indices per snapshot for pushing
        cellidx = [{c: i for i, c in enumerate(complexes[t].get(p, []))} for t in range(T)]
        r = [[0] * (T + 1) for _ in range(T)]
        for i in range(T):
            vecs = list(bases[i])
            r[i][i] = len(vecs)
            for j in range(i + 1, T):
                src = complexes[j - 1].get(p, [])
                src_cells = [frozenset(c) for c in src]
                vecs = [_push_vector(v, src_cells, cellidx[j], states[j][1]) for v in vecs]
                # rank of the image in H_p(X_j): joint rank with the
                # boundary space, minus the boundary rank
                r[i][j] = _rank_of(list(bpiv[j].values()) + vecs) - len(bpiv[j])
        for i in range(T):
            for j in range(i, T):
                a = r[i][j] - (r[i][j + 1] if j + 1 < T else 0)
                b = 0
                if i > 0:
                    b = r[i - 1][j] - (r[i - 1][j + 1] if j + 1 < T else 0)
                mult = a - b
                if mult < 0:
                    raise AssertionError("negative multiplicity at (%d, %d)" % (i, j))
                if mult == 0:
                    continue
                birth = 0.0 if i == 0 else alphas[i]
                death = INF if j == T - 1 else alphas[j + 1]
                if death != INF and death <= birth:
                    continue
                for _ in range(mult):
                    out.add(p, birth, death)
    out.sort()
    return out


def coning_oracle(stream: EventStream, k: Optional[int] = None,
                  max_cells: Optional[int] = 2_000_000) -> Barcode:
    """Tower barcode via coning every contraction into a pure filtration.

    Contract(i, j) becomes the cone with apex i over the closed star of
    j, after which j's star is frozen; the growing complex then has the
    same persistence as the tower. Intended as a small-instance oracle.
    """
    if stream.mode != "simplicial":
        raise MalformedStream("coning oracle needs a simplicial stream")
    if k is None:
        k = stream.k
    k = min(k, stream.k)
    filt: List[Tuple[float, Tuple[int, ...]]] = []
    added: Set[Tuple[int, ...]] = set()
    current: Set[frozenset] = set()
    alpha = None
    first_alpha = None

    def add_cell(verts: Tuple[int, ...]) -> None:
        if verts in added:
            return
        added.add(verts)
        filt.append((alpha, verts))
        if max_cells is not None and len(filt) > max_cells:
            raise GuardrailExceeded("coning oracle exceeded %d cells" % max_cells)

    for e in stream.events:
        if isinstance(e, Scale):
            alpha = e.alpha
            if first_alpha is None:
                first_alpha = e.alpha
        elif isinstance(e, Include):
            verts = (e.id,) if e.dim == 0 else e.vertices
            add_cell(tuple(sorted(verts)))
            current.add(frozenset(verts))
        else:
            i, j = e.i, e.j
            star = [c for c in current if j in c]
            closed: Set[frozenset] = set()
            for c in star:
                members = tuple(c)
                for rr in range(1, len(members) + 1):
                    for sub in itertools.combinations(members, rr):
                        closed.add(frozenset(sub))
            cones = sorted({tuple(sorted(c | {i})) for c in closed}, key=lambda t: (len(t), t))
            for verts in cones:
                add_cell(verts)
            current = {frozenset(i if v == j else v for v in c) for c in current}
    bc = reduce(filt, homology_cap=k)
    out = Barcode()
    for p in bc.dimensions():
        for b, d in bc.intervals(p):
            if first_alpha is not None and b == first_alpha:
                b = 0.0
            if d == INF or d > b:
                out.add(p, b, d)
    out.sort()
    return out
