import random

import pytest

from reductions.errors import DomainError
from reductions.exact import RationalMatrix, rat
from reductions.liealg import Element, classify_element
from reductions.pairs import sample_k_automorphism, singular_kernels, square_of
from reductions.planes import cartan_plane, is_anisotropic_subalgebra, plane_from_basis
from reductions.analysis import (
    DecompositionSignature,
    IncidencePoint,
    all_signatures,
    centralizer_map,
    coarse_invariants,
    decomposition_signature,
    double_centralizer,
    is_regular,
    jacobian_map,
    make_subvariety,
    nonalgebraic_witness,
    signature_genericity,
    signature_is_degeneration,
    signature_representative,
)


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


def D(*vals):
    n = len(vals)
    return RationalMatrix([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)])


def E(n, i, j):
    m = [[rat(0)] * n for _ in range(n)]
    m[i][j] = rat(1)
    return RationalMatrix(m)


# -- regularity and the centralizer map


def test_is_regular():
    pair = square_of("sl3")
    x = square_element(pair, D(1, 2, -3))
    assert is_regular(pair, x)
    assert not is_regular(pair, pair.g.zero())


def test_regular_nilpotent_sl2():
    pair = square_of("sl2")
    e = square_element(pair, E(2, 0, 1))
    assert is_regular(pair, e)
    plane = centralizer_map(pair, e)
    assert plane.dim == 1 and plane.contains(e)
    from reductions.planes import is_special_reduction

    assert is_special_reduction(plane, known_in_r=True)


def test_centralizer_map_semisimple_gives_cartan():
    pair = square_of("sl3")
    x = square_element(pair, D(1, 2, -3))
    plane = centralizer_map(pair, x)
    assert plane == cartan_plane(pair)
    assert centralizer_map(pair, 5 * x) == plane  # scale invariance


def test_centralizer_map_rejects_irregular():
    pair = square_of("sl3")
    with pytest.raises(DomainError):
        centralizer_map(pair, square_element(pair, D(1, 1, -2)))


def test_centralizer_map_k_equivariant():
    pair = square_of("sl3")
    rng = random.Random(12)
    x = square_element(pair, D(1, 2, -3))
    auto = sample_k_automorphism(pair, rng)
    moved = Element(pair.g, auto.apply(x.coords))
    lhs = centralizer_map(pair, moved)
    base = centralizer_map(pair, x)
    moved_base = plane_from_basis(
        pair, [Element(pair.g, auto.apply(b.coords)) for b in base.basis_elements()]
    )
    assert lhs == moved_base


def test_incidence_point_membership():
    pair = square_of("sl3")
    x = square_element(pair, D(1, 2, -3))
    plane = centralizer_map(pair, x)
    IncidencePoint(plane, x)
    with pytest.raises(DomainError):
        IncidencePoint(plane, square_element(pair, E(3, 0, 1)))


# -- signatures


def test_signature_equal_for_conjugate_centralizers():
    pair = square_of("sl3")
    a = decomposition_signature(pair, square_element(pair, D(1, 2, -3)))
    b = decomposition_signature(pair, square_element(pair, D(4, 5, -9)))
    assert a == b
    assert a.blocks == ((1, (1,)), (1, (1,)), (1, (1,)))


def test_signature_distinguishes_multiplicities():
    pair = square_of("sl3")
    a = decomposition_signature(pair, square_element(pair, D(1, 1, -2)))
    b = decomposition_signature(pair, square_element(pair, D(1, 2, -3)))
    assert a != b
    assert a.blocks == ((2, (1, 1)), (1, (1,)))


def test_signature_nilpotent_jordan_type():
    pair = square_of("sl3")
    x = square_element(pair, E(3, 0, 1))
    sig = decomposition_signature(pair, x)
    assert sig.blocks == ((3, (2, 1)),)


def test_signature_constant_on_k_orbit():
    pair = square_of("sl3")
    rng = random.Random(5)
    x = square_element(pair, D(1, 1, -2) + E(3, 0, 1))
    sig = decomposition_signature(pair, x)
    for _ in range(3):
        auto = sample_k_automorphism(pair, rng)
        assert decomposition_signature(pair, Element(pair.g, auto.apply(x.coords))) == sig


def test_signature_constant_on_double_centralizer_perturbation():
    pair = square_of("sl3")
    rng = random.Random(8)
    x = square_element(pair, D(1, 1, -2))
    dc = double_centralizer(pair, x)
    sig = decomposition_signature(pair, x)
    hits = 0
    for _ in range(8):
        coords = [rat(rng.randint(-3, 3)) for _ in range(dc.dim)]
        v = pair.g.zero()
        for c, row in zip(coords, dc.basis.entries):
            v = v + c * Element(pair.g, row)
        if v.is_zero():
            continue
        if decomposition_signature(pair, v) == sig:
            hits += 1
    assert hits > 0  # the open part is dense; generic draws land in it


def test_all_signatures_sl3_count():
    sigs = all_signatures(3)
    assert len(sigs) == 6


def test_signature_representative_roundtrip():
    pair = square_of("sl3")
    for sig in all_signatures(3):
        x = signature_representative(pair, sig)
        assert decomposition_signature(pair, x) == sig


# -- genericity order


def S(n, *blocks):
    return DecompositionSignature(n, blocks)


def test_genericity_regss_vs_regnilp():
    reg_ss = S(3, (1, (1,)), (1, (1,)), (1, (1,)))
    reg_nilp = S(3, (3, (3,)))
    assert signature_genericity(reg_ss, reg_nilp) == "more_general"
    assert signature_genericity(reg_nilp, reg_ss) == "less_general"


def test_genericity_equal():
    a = S(3, (2, (2,)), (1, (1,)))
    assert signature_genericity(a, a) == "equal"


def test_genericity_within_fixed_multiplicities():
    with_jordan = S(3, (2, (2,)), (1, (1,)))
    without = S(3, (2, (1, 1)), (1, (1,)))
    assert signature_genericity(with_jordan, without) == "more_general"


def test_genericity_incomparable():
    a = S(4, (2, (2,)), (2, (1, 1)))
    b = S(4, (3, (1, 1, 1)), (1, (1,)))
    # multiplicities {2,2} cannot coarsen to {3,1}
    assert signature_genericity(a, b) == "incomparable"


def test_degeneration_rule_merge_bound():
    two_blocks = S(3, (2, (1, 1)), (1, (1,)))
    assert signature_is_degeneration(two_blocks, S(3, (3, (2, 1))))
    assert signature_is_degeneration(two_blocks, S(3, (3, (1, 1, 1))))
    assert not signature_is_degeneration(two_blocks, S(3, (3, (3,))))


def test_genericity_rule_is_a_partial_order():
    # the merge-and-dominate rule must itself be reflexive, antisymmetric
    # and transitive on the full signature lists
    for n in (3, 4):
        sigs = all_signatures(n)
        for a in sigs:
            assert signature_is_degeneration(a, a)
        for a in sigs:
            for b in sigs:
                if a != b:
                    assert not (
                        signature_is_degeneration(a, b)
                        and signature_is_degeneration(b, a)
                    )
        for a in sigs:
            for b in sigs:
                if not signature_is_degeneration(a, b):
                    continue
                for c in sigs:
                    if signature_is_degeneration(b, c):
                        assert signature_is_degeneration(a, c)


def test_coarse_invariants():
    pair = square_of("sl3")
    x = square_element(pair, D(1, 1, -2))
    assert coarse_invariants(pair, x) == (4, 4)
    reg = square_element(pair, D(1, 2, -3))
    assert coarse_invariants(pair, reg) == (2, 2)


# -- subvarieties


def test_subvariety_full_anchor_is_point():
    pair = square_of("sl3")
    sv = make_subvariety(pair, pair.cartan)
    assert sv.centralizer_pair.rank == pair.rank
    assert sv.centralizer_pair.p.dim == pair.rank  # p' = a, a single point
    assert sv.contains(cartan_plane(pair))


def test_subvariety_root_kernel():
    pair = square_of("sl3")
    z = singular_kernels(pair)[0].kernel
    sv = make_subvariety(pair, z)
    assert sv.centralizer_pair.rank == pair.rank
    from reductions.pairs import dim_reduction_variety

    assert dim_reduction_variety(sv.centralizer_pair) == 2
    assert sv.contains(cartan_plane(pair))
    # transport a plane into the centralizer pair and back
    a = cartan_plane(pair)
    inner = sv.to_sub_plane(a)
    assert sv.to_ambient_plane(inner) == a


def test_subvariety_zero_anchor():
    pair = square_of("sl2")
    zero = pair.g.subspace([])
    sv = make_subvariety(pair, zero)
    assert sv.centralizer_pair.g.dim == pair.g.dim
    assert sv.contains(cartan_plane(pair))


# -- Jacobian comparison


def test_jacobian_sl2():
    pair = square_of("sl2")
    x = square_element(pair, D(1, -1))
    pv = jacobian_map(pair, x)
    assert pv.proportional_to(centralizer_map(pair, x).plucker())


def test_jacobian_sl3_random_regular():
    pair = square_of("sl3")
    rng = random.Random(3)
    found = 0
    while found < 5:
        mat = RationalMatrix(
            [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        )
        tr = mat.trace()
        mat = mat - RationalMatrix.identity(3) * rat(tr, 3)
        x = square_element(pair, mat)
        if x.is_zero() or not is_regular(pair, x):
            continue
        pv = jacobian_map(pair, x)
        assert pv.proportional_to(centralizer_map(pair, x).plucker())
        found += 1


def test_jacobian_irregular_vanishes():
    pair = square_of("sl3")
    with pytest.raises(DomainError):
        jacobian_map(pair, square_element(pair, D(1, 1, -2)))


# -- the non-algebraic witness


def test_nonalgebraic_witness():
    pair, plane, s_el = nonalgebraic_witness(5)
    assert plane.dim == 4
    assert is_anisotropic_subalgebra(plane)
    from reductions.planes import is_cj_closed

    assert not is_cj_closed(plane)
    assert not plane.contains(s_el)
    assert classify_element(s_el) == "semisimple"


def test_nonalgebraic_witness_needs_rank():
    with pytest.raises(DomainError):
        nonalgebraic_witness(4)
