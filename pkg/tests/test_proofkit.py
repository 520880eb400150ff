import random
from itertools import product

import pytest

from nilhyp.commutant import is_invariant
from nilhyp.exactalg import GF, QQ, Matrix, Subspace
from nilhyp.hyperlattice import enumerate_rsequences, is_valid, subspace_ii
from nilhyp.nilpotent import SegreType, block_subspace, canonical_generators, exponent
from nilhyp.proofkit import (
    NotWellDefined,
    eta,
    find_witness,
    hom_from_images,
    identity_hom,
    projection,
    structural_maps,
    swap_automorphism,
)
from nilhyp.verify import random_type
from oracles import FIELDS, conjugated

T12 = SegreType((1, 2), (1, 1))


def cyclic_killed_by(gs, key, q):
    """<u_key>[f^q]: the part of the cyclic summand annihilated by A^q."""
    return gs.cyclic(key) & gs.op.kernel(q)


class TestHomFromImages:
    def test_identity(self):
        gs = canonical_generators(SegreType((1, 3), (2, 1)), GF(3))
        assert identity_hom(gs).matrix == Matrix.identity(GF(3), 5)

    def test_low_to_high_needs_divisibility(self):
        gs = canonical_generators(T12, QQ)
        with pytest.raises(NotWellDefined) as err:
            hom_from_images(gs, {(1, 1): {(2, 1): [1]}})
        assert err.value.key == (1, 1) and err.value.component == (2, 1)

    def test_low_to_high_with_factor(self):
        gs = canonical_generators(T12, QQ)
        hom = hom_from_images(gs, {(1, 1): {(2, 1): [0, 1]}})
        assert hom.commutes()
        assert hom.apply(gs[(1, 1)]) == gs.op.apply(gs[(2, 1)])
        assert not any(hom.apply(gs[(2, 1)]))

    def test_degree_too_large(self):
        gs = canonical_generators(T12, GF(2))
        with pytest.raises(NotWellDefined):
            hom_from_images(gs, {(2, 1): {(1, 1): [0, 1]}})

    def test_unknown_generator(self):
        gs = canonical_generators(T12, GF(2))
        with pytest.raises(KeyError):
            hom_from_images(gs, {(3, 1): {}})

    def test_random_images_commute_and_respect_exponents(self):
        rng = random.Random(4)
        for seed in range(15):
            field = FIELDS[seed % 4]
            t, op, _ = conjugated(seed, field)
            gs = op.generators
            images = {}
            for key in t.keys():
                row = {}
                for comp in t.keys():
                    tj, tl = t.size(key[0]), t.size(comp[0])
                    low = max(0, tl - tj)
                    row[comp] = [0] * low + [rng.randint(-2, 2) for _ in range(tl - low)]
                images[key] = row
            hom = hom_from_images(gs, images)
            assert hom.commutes()
            for _ in range(5):
                x = tuple(field(rng.randint(-2, 2)) for _ in range(op.n))
                assert exponent(op, hom.apply(x)) <= exponent(op, x)


class TestSwap:
    def test_same_index_is_identity(self):
        gs = canonical_generators(SegreType((2,), (2,)), GF(5))
        assert swap_automorphism(gs, 1, 1, 1).matrix == Matrix.identity(GF(5), 4)

    def test_order_two(self):
        gs = canonical_generators(SegreType((2,), (2,)), GF(2))
        S = swap_automorphism(gs, 1, 1, 2).matrix
        assert S != Matrix.identity(GF(2), 4)
        assert S @ S == Matrix.identity(GF(2), 4)
        assert S.apply(gs[(1, 1)]) == gs[(1, 2)]

    def test_range(self):
        gs = canonical_generators(SegreType((2,), (2,)), GF(2))
        with pytest.raises(IndexError):
            swap_automorphism(gs, 1, 1, 3)

    def test_fixes_hyperinvariant_subspaces(self):
        for seed in range(10):
            t = SegreType.parse(["1:2,2:1", "2:3", "1:1,3:2"][seed % 3])
            t, op, _ = conjugated(seed, FIELDS[seed % 4], t=t)
            gs = op.generators
            for r in enumerate_rsequences(t):
                X = subspace_ii(gs, r)
                for j, s in t.keys():
                    for rho in range(1, t.mult(j) + 1):
                        alpha = swap_automorphism(gs, j, s, rho)
                        assert X.image(alpha.matrix) == X


class TestEta:
    def test_high_to_low(self):
        gs = canonical_generators(T12, GF(2))
        h = eta(gs, 2, 1)
        assert h.image == gs.cyclic((1, 1)) == cyclic_killed_by(gs, (1, 1), 2)

    def test_low_to_high(self):
        gs = canonical_generators(T12, GF(2))
        h = eta(gs, 1, 2)
        assert h.image == Subspace.span(GF(2), 3, [gs.op.apply(gs[(2, 1)])])
        assert h.image == cyclic_killed_by(gs, (2, 1), 1)

    def test_kills_other_blocks(self):
        for seed in range(10):
            t, op, _ = conjugated(seed, FIELDS[seed % 4], max_blocks=3)
            gs = op.generators
            for k, l in product(range(1, t.m + 1), repeat=2):
                if k == l:
                    continue
                h = eta(gs, k, l)
                for key in t.keys():
                    if key[0] != k:
                        assert not any(h.apply(gs[key]))

    def test_diagonal_rejected(self):
        gs = canonical_generators(T12, GF(2))
        with pytest.raises(ValueError):
            eta(gs, 1, 1)
        with pytest.raises(IndexError):
            eta(gs, 1, 3)

    def test_identities_on_random_types(self, rng):
        for i in range(12):
            t = random_type(rng, 3, 4, 2)
            if t.m < 2:
                continue
            _, op, _ = conjugated(i, FIELDS[i % 4], t=t)
            gs = op.generators
            for k, l in product(range(1, t.m + 1), repeat=2):
                if k == l:
                    continue
                for mu in range(1, t.mult(l) + 1):
                    h = eta(gs, k, l, mu)
                    assert h.commutes()
                    assert h.image == cyclic_killed_by(gs, (l, mu), t.size(k))
                    others = Subspace.zero(op.field, op.n)
                    for j in range(1, t.m + 1):
                        if j != k:
                            others = others + gs.block_space(j)
                    assert others <= h.kernel


class TestProjection:
    def test_single_block(self):
        gs = canonical_generators(SegreType((3,), (1,)), QQ)
        assert projection(gs, 1, 1).matrix == Matrix.identity(QQ, 3)

    def test_example(self):
        F = GF(3)
        gs = canonical_generators(T12, F)
        u1, fu2 = gs[(1, 1)], gs.op.apply(gs[(2, 1)])
        x = tuple(F.add(a, b) for a, b in zip(u1, fu2))
        assert projection(gs, 2, 1).apply(x) == fu2

    def test_idempotent_and_complete(self):
        for seed in range(12):
            t, op, _ = conjugated(seed, FIELDS[seed % 4])
            gs = op.generators
            total = Matrix.zeros(op.field, op.n)
            for key in t.keys():
                P = projection(gs, *key)
                assert P.matrix @ P.matrix == P.matrix
                assert P.image == gs.cyclic(key)
                assert P.commutes()
                total = total + P.matrix
            assert total == Matrix.identity(op.field, op.n)

    def test_keeps_hyperinvariant_subspaces(self):
        t, op, _ = conjugated(5, GF(3), t=SegreType.parse("1:2,3:1"))
        gs = op.generators
        for r in enumerate_rsequences(t):
            X = subspace_ii(gs, r)
            for key in t.keys():
                assert is_invariant(X, projection(gs, *key).matrix)


class TestWitness:
    def test_structural_maps_preserve_hyperinvariants(self):
        for seed in range(8):
            t, op, _ = conjugated(seed, FIELDS[seed % 4])
            gs = op.generators
            spaces = [subspace_ii(gs, r) for r in enumerate_rsequences(t)]
            for _, _, hom in structural_maps(gs):
                assert hom.commutes()
                for X in spaces:
                    assert is_invariant(X, hom.matrix)

    def test_none_for_hyperinvariant(self):
        t, op, _ = conjugated(2, QQ, t=T12)
        assert find_witness(op, op.kernel(1)) is None

    def test_invalid_r_caught_by_eta(self):
        gs = canonical_generators(SegreType((1, 3), (1, 1)), GF(2))
        for bad in [(1, 0), (0, 3)]:
            X = block_subspace(gs, bad)
            w = find_witness(gs.op, X, gs)
            assert w is not None and w.kind == "eta"
            assert X.contains(w.vector)
            assert not X.contains(w.matrix.apply(w.vector))

    def test_every_invalid_tuple_has_structural_witness(self, rng):
        for i in range(10):
            t = random_type(rng, 3, 4, 2)
            _, op, _ = conjugated(i, FIELDS[i % 4], t=t)
            gs = op.generators
            for r in product(*(range(s + 1) for s in t.sizes)):
                if is_valid(t, r):
                    continue
                w = find_witness(op, block_subspace(gs, r), gs)
                assert w is not None and w.kind in ("eta", "swap")
