import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from immanant_lab.errors import (
    DegreeMismatchError,
    GroupTooLargeError,
    InvalidGroupError,
    NotSamePartitionSizeError,
    TooLargeError,
)
from immanant_lab.groups import (
    CharacterFunction,
    Permutation,
    PermutationGroup,
    character_table_from_json,
    class_size,
    cycle_type,
    cyclic_character,
    cyclic_group,
    group_from_generators,
    partitions,
    sign_character,
    sn_character,
    sn_degree,
    sn_irreducible,
    symmetric_group,
    trivial_character,
    trivial_group,
    verify_character,
)

from conftest import inversion_sign


def count_syt(shape) -> int:
    """Standard Young tableaux of ``shape``, by placing n, n-1, ... in removable corners."""
    shape = list(shape)
    if sum(shape) == 0:
        return 1
    total = 0
    for i, row in enumerate(shape):
        if row and (i + 1 == len(shape) or shape[i + 1] < row):
            shape[i] -= 1
            total += count_syt(shape)
            shape[i] += 1
    return total


class TestPermutation:
    def test_composition_convention(self):
        p = Permutation.from_cycles(3, (0, 1))
        q = Permutation.from_cycles(3, (1, 2))
        assert (p * q)(1) == p(q(1))
        assert p * p.inverse() == Permutation.identity(3)

    def test_one_line_is_one_indexed(self):
        p = Permutation.from_one_line([2, 1, 3])
        assert p.images == (1, 0, 2)
        assert p.one_line() == [2, 1, 3]

    def test_rejects_non_bijection(self):
        with pytest.raises(InvalidGroupError):
            Permutation((0, 0, 1))

    def test_cycle_type_examples(self):
        assert cycle_type(Permutation.identity(4)) == (1, 1, 1, 1)
        assert cycle_type(Permutation.from_cycles(3, (0, 1, 2))) == (3,)
        assert cycle_type(Permutation.from_cycles(5, (0, 1), (2, 3))) == (2, 2, 1)

    @settings(max_examples=60, deadline=None)
    @given(st.permutations(list(range(6))))
    def test_sign_matches_inversion_parity(self, imgs):
        assert Permutation(tuple(imgs)).sign() == inversion_sign(imgs)


class TestGroups:
    def test_generator_examples(self):
        g = group_from_generators(2, [Permutation.from_cycles(2, (0, 1))])
        assert g.order == 2
        s3 = group_from_generators(3, [Permutation.from_cycles(3, (0, 1)), Permutation.from_cycles(3, (0, 1, 2))])
        assert {p.images for p in s3} == set(itertools.permutations(range(3)))
        assert group_from_generators(4, []).order == 1

    def test_identity_first_and_deterministic(self):
        gens = [Permutation.from_cycles(4, (0, 1, 2, 3)), Permutation.from_cycles(4, (0, 2))]
        g1, g2 = group_from_generators(4, gens), group_from_generators(4, gens)
        assert g1.elements[0] == Permutation.identity(4)
        assert [p.images for p in g1] == [p.images for p in g2]
        assert g1.order == 8  # dihedral of the square

    def test_closure(self):
        g = group_from_generators(5, [Permutation.from_cycles(5, (0, 1, 2)), Permutation.from_cycles(5, (2, 3, 4))])
        elems = set(p.images for p in g)
        assert g.order == 60
        for a in g:
            for b in g:
                assert (a * b).images in elems

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatchError):
            group_from_generators(3, [Permutation.identity(4)])

    def test_cap(self):
        gens = [Permutation.from_cycles(8, (0, 1)), Permutation.from_cycles(8, tuple(range(8)))]
        with pytest.raises(GroupTooLargeError):
            group_from_generators(8, gens)
        with pytest.raises(TooLargeError):
            symmetric_group(8)

    def test_constructor_checks(self):
        e, t = Permutation.identity(3), Permutation.from_cycles(3, (0, 1, 2))
        with pytest.raises(InvalidGroupError):
            PermutationGroup(3, [e, t])  # not closed
        with pytest.raises(InvalidGroupError):
            PermutationGroup(3, [t, e, t * t])  # identity not first
        with pytest.raises(InvalidGroupError):
            PermutationGroup(3, [e, e])

    def test_symmetric_orders(self):
        for n in range(1, 6):
            assert symmetric_group(n).order == np.prod(range(1, n + 1))
        assert trivial_group(4).order == 1
        assert cyclic_group(5).order == 5


class TestCharacters:
    def test_examples(self):
        assert sn_character((4,), (2, 1, 1)) == 1
        assert sn_character((1, 1, 1), (2, 1)) == -1
        assert sn_character((2, 1), (1, 1, 1)) == 2
        with pytest.raises(NotSamePartitionSizeError):
            sn_character((2, 1), (2, 2))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_degrees_count_tableaux(self, n):
        for lam in partitions(n):
            assert sn_character(lam, (1,) * n) == count_syt(lam) > 0
            assert sn_degree(lam) == count_syt(lam)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_sign_partition_is_parity(self, n):
        for mu in partitions(n):
            parity = (-1) ** (n - len(mu))
            assert sn_character((1,) * n, mu) == parity

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_orthogonality(self, n):
        lams = partitions(n)
        table = np.array([[sn_character(l, m) for m in lams] for l in lams], dtype=float)
        sizes = np.array([class_size(m) for m in lams], dtype=float)
        order = sizes.sum()
        # rows: sum_mu |C_mu| chi^l(mu) chi^k(mu) = n! delta
        assert np.allclose(table * sizes @ table.T, order * np.eye(len(lams)))
        # columns
        assert np.allclose(table.T @ table, np.diag(order / sizes))

    def test_class_sizes_sum(self):
        for n in range(1, 8):
            assert sum(class_size(m) for m in partitions(n)) == np.prod(range(1, n + 1))

    def test_class_functions_on_group(self):
        g = symmetric_group(4)
        for lam in partitions(4):
            chi = sn_irreducible(g, lam)
            for s in g:
                for t in g:
                    assert chi(t * s * t.inverse()) == chi(s)

    def test_verify_character_examples(self):
        g = symmetric_group(3)
        assert verify_character(sign_character(g))
        chi = sn_irreducible(g, (2, 1))
        assert sum(abs(v) ** 2 for v in chi.values) == 6
        assert verify_character(chi)
        assert not verify_character(trivial_character(g) + sign_character(g))

    def test_non_class_function_rejected(self):
        g = symmetric_group(3)
        vals = np.zeros(6)
        vals[0] = 1
        vals[1] = np.sqrt(5)  # norm 1 but not class-constant
        assert not verify_character(CharacterFunction(g, vals))

    def test_cyclic_characters(self):
        g = cyclic_group(4)
        for k in range(4):
            assert verify_character(cyclic_character(g, k))
        inner = cyclic_character(g, 1).inner(cyclic_character(g, 2))
        assert abs(inner) < 1e-12


class TestTables:
    def test_cycle_type_table(self):
        obj = {"degree": 3, "generators": [[2, 1, 3], [2, 3, 1]],
               "character": {"by": "cycle_type", "values": {"1,1,1": 2, "2,1": 0, "3": -1}}}
        t = character_table_from_json(json.loads(json.dumps(obj)))
        assert t.group.order == 6 and verify_character(t.character)

    def test_element_table(self):
        obj = {"degree": 2, "generators": [[2, 1]],
               "character": {"by": "element", "values": {"1 2": 1, "2 1": -1}}}
        t = character_table_from_json(obj)
        assert list(t.character.values) == [1, -1]

    def test_partition_table_degree_8(self):
        t = character_table_from_json({"degree": 8, "character": {"by": "partition", "values": [7, 1]}})
        assert t.partition == (7, 1) and t.group is None

    def test_missing_value(self):
        obj = {"degree": 3, "generators": [[2, 1, 3]], "character": {"by": "cycle_type", "values": {"1,1,1": 1}}}
        with pytest.raises(ValueError):
            character_table_from_json(obj)
