import numpy as np
import pytest

from ripsapprox.cubical import (
    ActiveVertexMap,
    CubicalComplex,
    active_vertices,
    closure,
    cubical_boundary,
    cubical_map,
    incident_faces,
    is_spanned,
    spanned_faces,
    spanned_faces_bruteforce,
)
from ripsapprox.geometry import PointCloud
from ripsapprox.lattice import (
    Face,
    GridVertex,
    ShiftSequence,
    build_frames,
    locate,
    vertex_map_g,
)

from conftest import random_cloud


def frames_fixed(lam, signs):
    rows = [tuple(r) for r in signs]
    sh = ShiftSequence.fixed(rows)
    return build_frames(lam, len(rows), sh.d, sh)


def vmap(s, assignment):
    return ActiveVertexMap(s, {tuple(z): list(ids) for z, ids in assignment.items()})


# --- active vertices ---


def test_active_vertices_examples():
    fr = frames_fixed(1.0, [(1,)])[0]
    V = active_vertices(fr, PointCloud([0.1]))
    assert dict(V.items()) == {(0,): [0]}

    V = active_vertices(fr, PointCloud([0.1, 0.2]))
    assert dict(V.items()) == {(0,): [0, 1]}

    V = active_vertices(fr, PointCloud([0.1, 1.9]))
    assert dict(V.items()) == {(0,): [0], (2,): [1]}


def test_active_vertices_partition_and_section():
    P = random_cloud(0, 9, 2)
    fr = frames_fixed(0.8, [(1, -1)])[0]
    V = active_vertices(fr, P)
    seen = sorted(pid for _, ids in V.items() for pid in ids)
    assert seen == list(range(P.n))
    for z, ids in V.items():
        assert ids == sorted(ids)
        assert V.section(z) == ids[0]
        for pid in ids:
            assert locate(fr, P.points[pid]).z == z


def test_active_vertex_map_rejects_empty_lists():
    with pytest.raises(ValueError):
        ActiveVertexMap(0, {(0, 0): []})


# --- spanning test ---


def test_spanned_antipodal_square():
    V = vmap(0, {(0, 0): [0], (1, 1): [1]})
    square = Face(0, (0, 0), 0b11)
    assert is_spanned(square, V)
    for edge in (Face(0, (0, 0), 0b01), Face(0, (0, 0), 0b10),
                 Face(0, (0, 1), 0b01), Face(0, (1, 0), 0b10)):
        assert not is_spanned(edge, V)
    assert is_spanned(Face(0, (0, 0), 0), V)
    assert not is_spanned(Face(0, (1, 0), 0), V)


def test_spanned_edge_cases():
    both = vmap(0, {(0,): [0], (1,): [1]})
    assert is_spanned(Face(0, (0,), 1), both)
    one = vmap(0, {(0,): [0]})
    assert not is_spanned(Face(0, (0,), 1), one)


def test_spanned_faces_examples():
    single = vmap(0, {(3, -2): [0]})
    fr = frames_fixed(1.0, [(1, 1)])[0]
    assert spanned_faces(fr, single) == {Face(0, (3, -2), 0)}

    shared_edge = vmap(0, {(0, 0): [0], (1, 0): [1]})
    got = spanned_faces(fr, shared_edge)
    assert got == {Face(0, (0, 0), 0), Face(0, (1, 0), 0), Face(0, (0, 0), 0b01)}

    antipodal = vmap(0, {(0, 0): [0], (1, 1): [1]})
    got = spanned_faces(fr, antipodal)
    assert got == {Face(0, (0, 0), 0), Face(0, (1, 1), 0), Face(0, (0, 0), 0b11)}


def test_spanned_faces_empty_rejected():
    fr = frames_fixed(1.0, [(1, 1)])[0]
    with pytest.raises(ValueError):
        spanned_faces(fr, vmap(0, {}))


def test_spanned_faces_matches_bruteforce():
    rng = np.random.default_rng(17)
    for trial in range(60):
        d = int(rng.integers(1, 4))
        fr = frames_fixed(1.0, [tuple(rng.choice((-1, 1), d))])[0]
        nverts = int(rng.integers(1, 7))
        zs = {tuple(int(t) for t in rng.integers(0, 3, d)) for _ in range(nverts)}
        V = vmap(0, {z: [i] for i, z in enumerate(sorted(zs))})
        assert spanned_faces(fr, V) == spanned_faces_bruteforce(fr, V)


def test_incident_faces_counts():
    star = list(incident_faces(0, (0, 0, 0), range(3)))
    assert len(star) == 27 and len(set(star)) == 27
    assert sum(1 for f in star if f.dim == 3) == 8
    sub = list(incident_faces(0, (0, 0, 0), [1]))
    assert len(sub) == 3


# --- closure and flags ---


def test_closure_antipodal_square_nine_faces():
    fr = frames_fixed(1.0, [(1, 1)])[0]
    V = vmap(0, {(0, 0): [0], (1, 1): [1]})
    U = closure(spanned_faces(fr, V))
    assert len(U) == 9
    active = U.active_faces()
    secondary = U.secondary_faces()
    assert len(active) == 3 and len(secondary) == 6
    assert sum(1 for f in active if f.dim == 2) == 1
    assert sum(1 for f in active if f.dim == 0) == 2
    assert all(f.dim in (0, 1) for f in secondary)
    assert sum(1 for f in secondary if f.dim == 1) == 4
    assert sum(1 for f in secondary if f.dim == 0) == 2
    U.verify_closed()


def test_closure_all_active_edge():
    spanned = {Face(0, (0,), 1), Face(0, (0,), 0), Face(0, (1,), 0)}
    U = closure(spanned)
    assert len(U) == 3
    assert len(U.active_faces()) == 3 and not U.secondary_faces()


def test_closure_rejects_mixed_scales():
    with pytest.raises(ValueError):
        closure({Face(0, (0,), 0), Face(1, (0,), 0)})


def test_complex_accessors_and_order():
    fr = frames_fixed(1.0, [(1, 1)])[0]
    V = vmap(0, {(0, 0): [0], (1, 1): [1]})
    U = closure(spanned_faces(fr, V))
    assert U.dim == 2
    faces = U.faces()
    keys = [(f.dim, f.anchor, f.mask) for f in faces]
    assert keys == sorted(keys)
    assert len(U.faces_of_dim(1)) == 4
    assert Face(0, (0, 0), 0b11) in U
    assert Face(0, (5, 5), 0) not in U
    assert U.is_active(Face(0, (0, 0), 0b11))
    assert not U.is_active(Face(0, (1, 0), 0))


def test_verify_closed_catches_gaps():
    broken = CubicalComplex(0, {Face(0, (0,), 1): "active"})
    with pytest.raises(AssertionError):
        broken.verify_closed()


# --- boundary operator ---


def test_boundary_interval_and_square():
    U = closure({Face(0, (0,), 1)})
    cols, p_faces, pm1 = cubical_boundary(U, 1)
    assert len(cols) == 1 and sorted(cols[0]) == [0, 1]
    assert len(pm1) == 2

    Usq = closure({Face(0, (0, 0), 0b11)})
    cols2, sq, edges = cubical_boundary(Usq, 2)
    assert len(cols2) == 1 and len(cols2[0]) == 4
    assert len(edges) == 4


def test_boundary_squares_to_zero():
    Usq = closure({Face(0, (0, 0, 0), 0b111)})
    for p in (2, 3):
        cols_p, pf, _ = cubical_boundary(Usq, p)
        cols_pm1, _, _ = cubical_boundary(Usq, p - 1)
        for col in cols_p:
            acc = 0
            for r in col:
                for rr in cols_pm1[r]:
                    acc ^= 1 << rr
            assert acc == 0


def test_boundary_validation():
    U = closure({Face(0, (0,), 1)})
    with pytest.raises(ValueError):
        cubical_boundary(U, 0)


# --- the cross-scale map ---


def test_cubical_map_collapsing_edge_lands_on_active_vertex():
    frames = frames_fixed(1.0, [(1,)])
    P = PointCloud([0.1, 0.9])
    V0 = active_vertices(frames[0], P)
    U0 = closure(spanned_faces(frames[0], V0))
    edge = Face(0, (0,), 1)
    assert U0.is_active(edge)
    img = cubical_map(frames, 0, edge)
    assert img.dim == 0
    V1 = active_vertices(frames[1], P)
    U1 = closure(spanned_faces(frames[1], V1))
    assert img in U1 and U1.is_active(img)


def _complexes_for(P, lam, signs):
    frames = frames_fixed(lam, signs)
    out = []
    for fr in frames:
        V = active_vertices(fr, P)
        out.append((V, closure(spanned_faces(fr, V))))
    return frames, out


def test_push_equals_relocate():
    # locating at s+1 equals mapping the located vertex at s
    rng = np.random.default_rng(23)
    for trial in range(20):
        d = int(rng.integers(1, 4))
        P = random_cloud(100 + trial, int(rng.integers(2, 8)), d, box=6.0)
        signs = [tuple(rng.choice((-1, 1), d)) for _ in range(4)]
        frames, levels = _complexes_for(P, 0.7, signs)
        for s in range(4):
            V, _ = levels[s]
            pushed = {}
            for z, ids in V.items():
                y = vertex_map_g(frames, s, GridVertex(s, z)).z
                pushed.setdefault(y, []).extend(ids)
            pushed = {z: sorted(v) for z, v in pushed.items()}
            assert pushed == dict(levels[s + 1][0].items())


def test_section_composes_with_vertex_map():
    # mapping an active vertex = relocating its representative point
    rng = np.random.default_rng(29)
    for trial in range(10):
        d = int(rng.integers(1, 4))
        P = random_cloud(200 + trial, 6, d, box=5.0)
        signs = [tuple(rng.choice((-1, 1), d)) for _ in range(3)]
        frames, levels = _complexes_for(P, 1.1, signs)
        for s in range(3):
            V, _ = levels[s]
            for z in V:
                got = vertex_map_g(frames, s, locate(frames[s], P.points[V.section(z)]))
                want = locate(frames[s + 1], P.points[V.section(z)])
                assert got == want


def test_active_faces_map_to_active_faces():
    rng = np.random.default_rng(31)
    for trial in range(15):
        d = int(rng.integers(1, 4))
        P = random_cloud(300 + trial, int(rng.integers(2, 9)), d, box=8.0)
        signs = [tuple(rng.choice((-1, 1), d)) for _ in range(4)]
        frames, levels = _complexes_for(P, 0.9, signs)
        for s in range(4):
            _, U = levels[s]
            _, U_next = levels[s + 1]
            for f in U.faces():
                img = cubical_map(frames, s, f)
                assert img in U_next
                if U.is_active(f):
                    assert U_next.is_active(img)


def test_small_diameter_subsets_share_a_face():
    # points within alpha_s of each other land in one elementary cube
    rng = np.random.default_rng(37)
    for trial in range(30):
        d = int(rng.integers(1, 4))
        fr = frames_fixed(1.0, [tuple(rng.choice((-1, 1), d))])[0]
        base = rng.uniform(-5, 5, d)
        Q = [base + rng.uniform(0, fr.alpha, d) * 0.999 for _ in range(4)]
        zs = [locate(fr, q).z for q in Q]
        for i in range(d):
            coords = [z[i] for z in zs]
            assert max(coords) - min(coords) <= 1


def test_secondary_vertex_maps_into_next_complex():
    frames = frames_fixed(1.0, [(1, 1)])
    P = PointCloud([[0.1, 0.1], [0.9, 0.9]])
    V0 = active_vertices(frames[0], P)
    U0 = closure(spanned_faces(frames[0], V0))
    V1 = active_vertices(frames[1], P)
    U1 = closure(spanned_faces(frames[1], V1))
    for f in U0.secondary_faces():
        assert cubical_map(frames, 0, f) in U1
