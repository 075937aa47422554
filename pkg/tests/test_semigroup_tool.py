import itertools
import random

import pytest

from ci_errors import NoMultipleExists, NotPointed, ScanLimitExceeded, ZeroVector
from cone_tool import cone_membership, positive_functional
from generator_set import GeneratorSet
from helpers import brute_membership, solves
from semigroup_tool import exists_positive_multiple, membership, multiples_step, multiples_trace, smallest_multiple, validate


def test_validate():
    assert validate([(4,), (6,), (9,)])
    assert not validate([(1, 0), (-1, 0)])
    assert validate([(1, 1), (-1, 1), (0, 1)])


def test_membership_examples():
    assert membership((18,), [(4,), (6,)]) == (3, 1)
    assert membership((3,), [(4,), (5,)]) is None
    assert membership((0, 0), [(1, 0), (0, 1)]) == (0, 0)
    assert membership((-4,), [(4,)]) is None
    with pytest.raises(NotPointed):
        membership((1, 0), [(1, 0), (-1, 0)])


def test_membership_returns_greatest_certificate():
    # 20 = 5·4 = 2·4 + 2·6，系数从大到小尝试，得到字典序最大的证书
    assert membership((20,), [(4,), (6,)]) == (5, 0)
    assert membership((0, 0, 2), [(1, 0, 1), (-1, 0, 1)]) == (1, 1)


def test_membership_agrees_with_brute_force():
    rng = random.Random(41)
    for _ in range(40):
        m, n = rng.randint(1, 4), rng.randint(1, 2)
        vectors = []
        while len(vectors) < m:
            v = tuple(rng.randint(0, 12) for _ in range(n))
            if any(v):
                vectors.append(v)
        A = GeneratorSet(tuple(vectors))
        c = positive_functional(A)
        b = tuple(rng.randint(0, 24) for _ in range(n))
        certificate = membership(b, A)
        assert (certificate is not None) == brute_membership(b, A.vectors, c)
        if certificate is not None:
            assert all(x >= 0 for x in certificate)
            assert solves(certificate, A.vectors, b)


def test_exists_positive_multiple():
    assert exists_positive_multiple((3,), [(4,), (5,)])
    assert not exists_positive_multiple((-1,), [(4,), (5,)])
    assert exists_positive_multiple((0, 0, 1), [(1, 0, 1), (-1, 0, 1)])
    with pytest.raises(ZeroVector):
        exists_positive_multiple((0,), [(4,)])


@pytest.mark.parametrize("b, A, expected", [
    ((3,), [(4,), (5,)], 3),
    ((18,), [(4,), (6,)], 1),
    ((1,), [(2,)], 2),
    ((0, 0, 1), [(1, 0, 1), (-1, 0, 1)], 2),
    ((-1,), [(4,), (5,)], None),
])
def test_smallest_multiple(b, A, expected):
    assert smallest_multiple(b, A) == expected


def test_three_way_agreement():
    rng = random.Random(43)
    for _ in range(30):
        vectors = []
        while len(vectors) < 3:
            vectors.append((rng.randint(-3, 3), rng.randint(1, 4)))
        A = GeneratorSet(tuple(vectors))
        b = (rng.randint(-4, 4), rng.randint(-2, 4))
        if not any(b):
            continue
        exists = exists_positive_multiple(b, A)
        assert exists == (smallest_multiple(b, A) is not None) == (cone_membership(b, A) is not None)


def test_multiples_trace_examples():
    trace = multiples_trace((3,), [(4,), (5,)])
    assert trace.members == (3, 4, 5)
    assert trace.complete_from == 3
    assert not trace.contains(2)
    assert trace.contains(100)
    assert list(itertools.islice(trace.iter_members(), 4)) == [3, 4, 5, 6]

    trace = multiples_trace((18,), [(4,), (6,)])
    assert trace.complete_from == 1
    assert trace.contains(1)

    trace = multiples_trace((1,), [(1,)])
    assert trace.members == (1,)
    assert trace.complete_from == 1


def test_multiples_trace_gap_before_tail():
    # 7·t ∈ <5, 8>：7 ∉，14 ∉，21 = 5+8+8，28 = 4·5+8，35，42，49 ... 最小成员3，之后连续三个成员即可停止
    trace = multiples_trace((7,), [(5,), (8,)])
    assert trace.members[0] == 3
    for t in range(1, 40):
        assert trace.contains(t) == (membership((7 * t,), [(5,), (8,)]) is not None)
    members = [t for t in range(1, 40) if trace.contains(t)]
    for s, t in itertools.combinations_with_replacement(members, 2):
        if s + t < 40:
            assert trace.contains(s + t)


def test_multiples_trace_errors():
    with pytest.raises(NoMultipleExists):
        multiples_trace((-1,), [(4,), (5,)])
    with pytest.raises(NoMultipleExists):
        multiples_step((-1,), [(4,), (5,)])
    # 5、7之后下一个成员是10，8之前看不到完整的尾部
    with pytest.raises(ScanLimitExceeded):
        multiples_trace((1,), [(5,), (7,)], scan_limit=8)


def test_scan_limit_from_config(fresh_config):
    fresh_config(TORIC_TRACE_SCAN_LIMIT=8)
    with pytest.raises(ScanLimitExceeded):
        multiples_trace((1,), [(5,), (7,)])
    assert multiples_trace((1,), [(5,), (7,)], scan_limit=64).complete_from == 24


@pytest.mark.parametrize("b, A, step", [
    ((0, 1), [(1, 0), (0, 2), (1, 1)], 2),
    ((1, 0), [(2, 0), (0, 1), (1, 1)], 2),
    ((1, 1), [(2, 0), (0, 1), (1, 1)], 1),
    ((3,), [(4,), (5,)], 1),
    ((1, 0, 0), [(2, 0, 0), (0, 0, 1), (1, 0, 1)], 2),
])
def test_multiples_step(b, A, step):
    assert multiples_step(b, A) == step


def test_multiples_trace_with_step():
    # 只有偶数倍落在半群中：(0, t) 只能用 (0, 2) 表示
    A = [(1, 0), (0, 2), (1, 1)]
    trace = multiples_trace((0, 1), A)
    assert (trace.members, trace.complete_from, trace.step) == ((2,), 2, 2)
    for t in range(1, 30):
        assert trace.contains(t) == (membership((0, t), A) is not None)
    assert list(itertools.islice(trace.iter_members(), 4)) == [2, 4, 6, 8]

    # 面上的 (0,6)、(0,9) 生成的格包含 (0,3)，步长为1，成员是 <2, 3>
    A = [(1, 0), (0, 6), (0, 9), (1, 1)]
    trace = multiples_trace((0, 3), A)
    assert (trace.members, trace.complete_from, trace.step) == ((2, 3), 2, 1)
    for t in range(1, 30):
        assert trace.contains(t) == (membership((0, 3 * t), A) is not None)
