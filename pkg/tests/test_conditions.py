import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import Polygon

from carpetdim import gallery
from carpetdim.conditions import (
    check_columnwise_rosc,
    check_cond_box,
    check_cond_main,
    check_rosc,
    condition_report,
    diag_homo_threshold,
    exact_overlap_scan,
    overlap_pairs,
    transversality_sufficient,
)
from carpetdim.core import validate_system
from carpetdim.dimension import hausdorff_dimension_upper
from carpetdim.errors import AllColumnsSingleton, NotDiagHomo, ScanTooLarge

from conftest import random_system


def fm(a):
    return gallery.build("fm_overlap", [a])


def test_overlap_pairs_fm():
    g = fm(0.15)
    pairs = overlap_pairs(g.system())
    labelled = [{tuple(sorted(map(g.to_label, p))) for p in col} for col in pairs]
    assert {(3, 5), (4, 6)} == set().union(*labelled)
    assert any(not col for col in pairs)
    assert overlap_pairs(gallery.build("fm_carpet", [0.3]).system()) == [[], [], []]


def test_overlap_pairs_shapely_oracle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        s = random_system(rng, max_per_col=4, negative=True)
        pairs = {p for col in overlap_pairs(s) for p in col}
        polys = [Polygon(m.corners()) for m in s.maps]
        for k, l in itertools.combinations(range(s.n_maps), 2):
            if s.phi[k] != s.phi[l]:
                continue
            area = polys[k].intersection(polys[l]).area
            if area > 1e-9:
                assert (k + 1, l + 1) in pairs
            elif area == 0:
                assert (k + 1, l + 1) not in pairs


def test_shared_edge_is_not_overlap():
    s = validate_system([(0.5, 0.4, 0, 0, 0), (0.5, 0.4, 0, 0, 0.4), (0.5, 0.3, 0, 0.5, 0)], [2, 1])
    assert check_rosc(s)["status"] == "holds"


def test_rosc_witness():
    g = fm(0.15)
    res = check_rosc(g.system())
    assert res["status"] == "fails"
    assert tuple(sorted(map(g.to_label, res["witness"]))) == (3, 5)
    assert check_columnwise_rosc(g.system())["status"] == "fails"
    assert check_rosc(gallery.build("zipper", [0.1]).system())["status"] == "holds"


def test_transversality():
    t = transversality_sufficient(fm(0.05).system())
    assert t["status"] == "holds"
    assert t["margin"] == pytest.approx(0.9 / 2.9 - 0.15, abs=1e-12)
    assert transversality_sufficient(fm(0.15).system())["status"] == "inconclusive"
    vac = transversality_sufficient(gallery.build("fm_carpet", [0.3]).system())
    assert vac["status"] == "holds" and vac["vacuous"]


def test_transversality_monotone_in_a():
    statuses = [transversality_sufficient(fm(a).system())["status"] for a in np.linspace(0.01, 0.3, 30)]
    first_bad = statuses.index("inconclusive")
    assert all(s == "inconclusive" for s in statuses[first_bad:])


def test_cond_main_threshold_fm():
    # counts (2, 2, 2), b = 1/3: cond_main iff log b / log a < log 3 / log 6, i.e. a < 1/6
    for a, expect in [(0.1, True), (0.15, True), (0.2, False), (0.3, False)]:
        s = fm(a).system()
        alpha, p = hausdorff_dimension_upper(s)
        assert check_cond_main(s, p)["holds"] is expect
    assert diag_homo_threshold([2, 2, 2]) == pytest.approx(math.log(3) / math.log(6), abs=1e-12)


def test_cond_main_singletons():
    s = validate_system([(0.5, 0.2, 0, 0, 0), (0.25, 0.1, 0, 0.6, 0)], [1, 1])
    assert check_cond_main(s, [0.5, 0.5])["rhs"] == 1.0


def test_cond_box_signs():
    assert check_cond_box(gallery.build("fm_carpet", [0.3]).system())["holds"] is False
    assert check_cond_box(gallery.build("x_equiv_x", [0.05]).system())["holds"] is True


def test_threshold_values():
    assert diag_homo_threshold([2, 3, 2]) == pytest.approx(0.5625586, abs=1e-7)
    assert diag_homo_threshold([2, 1]) == pytest.approx(diag_homo_threshold([1, 2]), abs=1e-12)
    with pytest.raises(NotDiagHomo):
        diag_homo_threshold(gallery.build("smiley").system())
    with pytest.raises(AllColumnsSingleton):
        diag_homo_threshold([1, 1, 1])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_threshold_equivalence(seed):
    rng = np.random.default_rng(seed)
    s = random_system(rng, diag=True, shear=False)
    if max(s.partition.sizes) == 1 or len(set(s.partition.sizes)) == 1:
        return
    x = math.log(abs(s.b[0])) / math.log(abs(s.a[0]))
    x0 = diag_homo_threshold(s)
    if abs(x - x0) < 1e-6:
        return
    _, p = hausdorff_dimension_upper(s)
    assert check_cond_main(s, p)["holds"] == (x < x0)


def test_scan_examples():
    same = exact_overlap_scan(([0.5, 0.5], [0.2, 0.2]), 3)
    assert same["found"] and same["level"] == 1 and same["delta"] == [0.0]
    thirds = exact_overlap_scan(([1 / 3] * 3, [0, 1 / 3, 2 / 3]), 5)
    assert not thirds["found"]
    assert thirds["delta"] == pytest.approx([3.0 ** -n for n in range(1, 6)], rel=1e-9)
    pair = exact_overlap_scan(([1 / 3, 1 / 3], [0, 0.5]), 2)
    assert pair["delta"] == pytest.approx([0.5, 1 / 6])
    with pytest.raises(ScanTooLarge):
        exact_overlap_scan(([0.1] * 10, np.linspace(0, 0.9, 10)), 7)


def test_scan_brute_force():
    r = np.array([0.4, 0.4, 0.3])
    t = np.array([0.0, 0.35, 0.7])
    res = exact_overlap_scan((r, t), 4)
    for n in range(1, 5):
        pts = {}
        for w in itertools.product(range(3), repeat=n):
            der, off = 1.0, 0.0
            for i in w:
                off += der * t[i]
                der *= r[i]
            pts.setdefault(round(der, 12), []).append(off)
        gaps = [abs(x - y) for v in pts.values() for x, y in itertools.combinations(v, 2)]
        assert res["delta"][n - 1] == pytest.approx(min(gaps), abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.05, 0.6), min_size=2, max_size=4),
       st.lists(st.floats(0, 1), min_size=4, max_size=4))
def test_delta_nonincreasing(r, t):
    res = exact_overlap_scan((r, t[:len(r)]), 4)
    d = res["delta"]
    for x, y in zip(d, d[1:]):
        if math.isfinite(x) and math.isfinite(y):
            assert y <= x + 1e-15


def test_report_json():
    rep = condition_report(fm(0.15).system(), overlap_scan=3)
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["rosc"]["status"] == "fails"
    assert d["transversality_sufficient"]["status"] == "inconclusive"
