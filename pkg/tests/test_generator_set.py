import pytest

from ci_errors import AmbientMismatch, EmptyInput, ZeroGenerator
from generator_set import GeneratorSet, as_generator_set, check_ambient


def test_normalises_and_keeps_order():
    A = GeneratorSet([[4], [6], [9], [4]], name="dup")
    assert A.vectors == ((4,), (6,), (9,), (4,))
    assert (A.m, A.n, len(A)) == (4, 1, 4)
    assert A[2] == (9,)
    assert list(A) == [(4,), (6,), (9,), (4,)]


@pytest.mark.parametrize("vectors, error", [
    ([], EmptyInput),
    ([()], AmbientMismatch),
    ([(1, 0), (1,)], AmbientMismatch),
    ([(1, 0), (0, 0)], ZeroGenerator),
])
def test_rejects_invalid_vectors(vectors, error):
    with pytest.raises(error):
        GeneratorSet(vectors)


def test_subset_scaled_concat():
    A = GeneratorSet(((1, 0), (0, 1), (1, 1)), name="A")
    assert A.subset((2, 0)).vectors == ((1, 0), (1, 1))
    assert A.scaled(3).vectors == ((3, 0), (0, 3), (3, 3))
    assert A.scaled(3).name == "A"
    assert A.concat(GeneratorSet(((2, 5),))).vectors[-1] == (2, 5)
    with pytest.raises(ValueError):
        A.scaled(0)
    with pytest.raises(AmbientMismatch):
        A.concat(GeneratorSet(((1,),)))


def test_helpers():
    A = as_generator_set([[1, 2], [3, 4]])
    assert isinstance(A, GeneratorSet)
    assert as_generator_set(A) is A
    assert check_ambient([5, 6], A) == (5, 6)
    with pytest.raises(AmbientMismatch):
        check_ambient([1], A)
