"""端到端的性质检查

默认运行缩小的语料，完整规模的语料标记为slow：pytest -m slow
"""
import itertools
import json
import math
import random
import warnings

import pytest

from ci_errors import BudgetExceeded
from ci_toolkit import main
from cone_tool import SumType, cone_dim, cone_membership, cones_equal, extreme_rays, is_strongly_convex
from directsum_tool import (DIRECT_SUM_KINDS, bipyramid, ci_witness, direct_sum, is_general_bipyramidal, random_ci_instance, random_ci_pair,
                            random_direct_sum_pair)
from generator_set import GeneratorSet
from gluing_tool import Mode, Node, chain_of_partitions, check_s_gluing, is_ci_cone, is_complete_intersection
from instance_utils import format_instance_text
from linalg_utils import dot
from toric_oracle_tool import is_ci_oracle

TRIPLE_BUDGET = 2_000_000


def _numerical_triples(largest: int):
    seen = set()
    for triple in itertools.combinations(range(3, largest + 1), 3):
        g = math.gcd(*triple)
        reduced = tuple(x // g for x in triple)
        if reduced not in seen:
            seen.add(reduced)
            yield reduced


def _check_internal_count(A: GeneratorSet, tree) -> None:
    chain = chain_of_partitions(tree, A)
    assert chain.internal_merges == len(extreme_rays(A)) - cone_dim(A)


def _oracle_agreement(largest: int, seeds: int) -> None:
    # 数值三元组必须全部检查，预算放宽；随机实例可以因规模被跳过，但要统计
    for triple in _numerical_triples(largest):
        A = GeneratorSet(tuple((x,) for x in triple))
        report = is_ci_oracle(A, budget=TRIPLE_BUDGET)
        verdict, tree = is_complete_intersection(A)
        assert report.is_ci == verdict, triple
        if tree is not None:
            _check_internal_count(A, tree)

    skipped = []
    for seed in range(seeds):
        A = random_ci_instance(seed, 1 + seed % 3, 1 + seed % 2, Mode.GLUING)
        try:
            report = is_ci_oracle(A)
        except BudgetExceeded:
            skipped.append(seed)
            continue
        verdict, tree = is_complete_intersection(A)
        assert report.is_ci == verdict, A.vectors
        _check_internal_count(A, tree)
    if skipped:
        warnings.warn(f"验证器因规模跳过了{len(skipped)}/{seeds}个随机实例: {skipped}")


def test_oracle_agreement():
    _oracle_agreement(largest=10, seeds=6)


@pytest.mark.slow
def test_oracle_agreement_full():
    _oracle_agreement(largest=20, seeds=100)


def test_known_instances(numerical_469, numerical_345, bipyramid3):
    verdict, tree = is_complete_intersection(numerical_469)
    assert verdict
    assert isinstance(tree, Node) and isinstance(tree.right, Node)
    assert not isinstance(tree.right.left, Node) and not isinstance(tree.right.right, Node)

    assert not is_complete_intersection(numerical_345)[0]
    assert is_ci_cone(numerical_345)[0]

    assert is_complete_intersection(bipyramid3)[0]
    report = is_ci_oracle(bipyramid3)
    assert report.mu == report.height == 1


def _ray_accounting(per_kind: int) -> None:
    hits = {kind: 0 for kind in DIRECT_SUM_KINDS}
    for kind in DIRECT_SUM_KINDS:
        for seed in range(per_kind):
            ambient = (3 if kind == "internal" else 2) + seed % (4 if kind == "internal" else 5)
            A1, A2 = random_direct_sum_pair(seed, ambient, kind)
            result = direct_sum(A1, A2)
            assert result is not None
            assert result.dim == result.summand_dims[0] + result.summand_dims[1] - 1
            assert len(result.actual_rays) == result.predicted_rays
            observed = result.sum_type.value if result.sum_type == SumType.INTERNAL else result.external_case.value
            hits[observed] += 1

            # 两部分都是尖锥时和也是尖锥，用正泛函逐个验证
            pointed, c = is_strongly_convex(result.generators)
            assert pointed
            assert all(dot(c, a) > 0 for a in result.generators.vectors)

            # 加入一个生成元的反向量后，和包含一条直线，见证向量及其反向量都在锥中
            line = tuple(-x for x in A1[0])
            broken = A1.concat(GeneratorSet((line,)))
            assert not is_strongly_convex(broken)[0]
            pointed, w = is_strongly_convex(broken.concat(A2))
            assert not pointed
            union = broken.concat(A2)
            assert cone_membership(w, union) is not None
            assert cone_membership(tuple(-x for x in w), union) is not None
    assert hits == {kind: per_kind for kind in DIRECT_SUM_KINDS}


def test_ray_accounting():
    _ray_accounting(per_kind=8)


@pytest.mark.slow
def test_ray_accounting_full():
    _ray_accounting(per_kind=170)


def _ray_bound(count: int, top_dim: int) -> None:
    for seed in range(count):
        dim = 2 + seed % (top_dim - 1)
        A = random_ci_instance(seed, dim, 1 + seed % 3, Mode.S_GLUING)
        verdict, tree = is_ci_cone(A)
        assert verdict
        k = len(extreme_rays(A))
        assert k <= 2 * dim - 2
        if k == 2 * dim - 2:
            assert is_general_bipyramidal(A)[0]
        _check_internal_count(A, tree)


def test_ray_bound():
    _ray_bound(count=8, top_dim=3)


@pytest.mark.slow
def test_ray_bound_full():
    _ray_bound(count=200, top_dim=5)


@pytest.mark.parametrize("n", range(2, 7))
def test_bipyramid_equality_case(n):
    B = bipyramid(n)
    assert len(extreme_rays(B)) == 2 * n - 2
    assert is_general_bipyramidal(B)[0]
    verdict, tree = is_ci_cone(B)
    assert verdict
    _check_internal_count(B, tree)
    assert is_complete_intersection(B)[0]


def test_pentagon_is_not_a_ci_cone(pentagon):
    assert len(extreme_rays(pentagon)) == 5
    assert not is_ci_cone(pentagon)[0]


def _witness_round_trip(count: int) -> None:
    for seed in range(count):
        A1, A2 = random_ci_pair(seed, 1 + seed % 3)
        result = ci_witness(A1, A2)
        assert is_complete_intersection(result.generators)[0]
        assert cones_equal(result.generators, A1.concat(A2))


def test_witness_round_trip():
    _witness_round_trip(count=6)


@pytest.mark.slow
def test_witness_round_trip_full():
    _witness_round_trip(count=100)


def _random_pointed(rng: random.Random) -> GeneratorSet:
    """最后一个坐标为正，锥一定是尖锥"""
    n = rng.randint(2, 3)
    return GeneratorSet(tuple(tuple(rng.randint(-2, 2) for _ in range(n - 1)) + (rng.randint(1, 3),) for _ in range(rng.randint(3, 5))))


def _s_gluing_equivalence(count: int) -> None:
    rng = random.Random(2024)
    for _ in range(count):
        A = _random_pointed(rng)
        E1 = tuple(sorted(rng.sample(range(A.m), rng.randint(1, A.m - 1))))
        E2 = tuple(i for i in range(A.m) if i not in E1)
        result = direct_sum(A.subset(E1), A.subset(E2))
        glued = result is not None and cones_equal(result.generators, A)
        assert (check_s_gluing(A, E1, E2) is not None) == glued


def test_s_gluing_equivalence():
    _s_gluing_equivalence(count=40)


@pytest.mark.slow
def test_s_gluing_equivalence_full():
    _s_gluing_equivalence(count=300)


def _cli_determinism(capsys, tmp_path, count: int) -> None:
    for seed in range(count):
        A = random_ci_instance(seed, 1 + seed % 3, 1 + seed % 2, Mode.S_GLUING if seed % 2 else Mode.GLUING)
        path = tmp_path / f"instance{seed}.txt"
        path.write_text(format_instance_text(A), encoding="utf-8")
        for command in ("analyze", "is-ci", "is-ci-cone", "rays"):
            outputs = []
            for _ in range(2):
                main([command, str(path), "--json"])
                outputs.append(capsys.readouterr().out)
            assert outputs[0] == outputs[1]
            json.loads(outputs[0])


def test_cli_determinism(capsys, tmp_path):
    _cli_determinism(capsys, tmp_path, count=4)


@pytest.mark.slow
def test_cli_determinism_full(capsys, tmp_path):
    _cli_determinism(capsys, tmp_path, count=50)
