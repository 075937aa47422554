"""
生成元集合 A = {a_0, ..., a_{m-1}} ⊂ Z^n

生成元的顺序固定，下标就是划分、证书和分解树中使用的身份标识。
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from ci_errors import AmbientMismatch, EmptyInput, ZeroGenerator
from linalg_utils import IntMatrix, IntVector


@dataclass(frozen=True)
class GeneratorSet:
    """有序的非零整数向量集合（允许重复向量）"""
    vectors: IntMatrix
    name: Optional[str] = None

    def __post_init__(self):
        vectors = tuple(tuple(int(x) for x in v) for v in self.vectors)
        if not vectors:
            raise EmptyInput("生成元集合不能为空")
        n = len(vectors[0])
        if n == 0:
            raise AmbientMismatch("生成元的环境维数必须至少为1")
        for i, v in enumerate(vectors):
            if len(v) != n:
                raise AmbientMismatch(f"第{i}个生成元的长度为{len(v)}，期望{n}")
            if not any(v):
                raise ZeroGenerator(f"第{i}个生成元是零向量")
        object.__setattr__(self, "vectors", vectors)

    @property
    def m(self) -> int:
        return len(self.vectors)

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, index: int) -> IntVector:
        return self.vectors[index]

    def subset(self, indices: Iterable[int]) -> "GeneratorSet":
        """按下标取子集 A^E（保持下标升序）"""
        return GeneratorSet(tuple(self.vectors[i] for i in sorted(indices)))

    def scaled(self, k: int) -> "GeneratorSet":
        """k·A，k为正整数"""
        if k <= 0:
            raise ValueError(f"缩放系数必须为正整数: {k}")
        return GeneratorSet(tuple(tuple(k * x for x in v) for v in self.vectors), self.name)

    def concat(self, other: "GeneratorSet") -> "GeneratorSet":
        """A1 ∪ A2，先A1后A2"""
        if other.n != self.n:
            raise AmbientMismatch(f"环境维数不一致: {self.n} != {other.n}")
        return GeneratorSet(self.vectors + other.vectors)


GeneratorLike = Union[GeneratorSet, Sequence[Sequence[int]]]


def as_generator_set(A: GeneratorLike) -> GeneratorSet:
    if isinstance(A, GeneratorSet):
        return A
    return GeneratorSet(tuple(tuple(v) for v in A))


def as_vector(v: Sequence[int]) -> IntVector:
    return tuple(int(x) for x in v)


def check_ambient(v: Sequence[int], A: GeneratorSet) -> IntVector:
    v = as_vector(v)
    if len(v) != A.n:
        raise AmbientMismatch(f"向量长度{len(v)}与生成元的环境维数{A.n}不一致")
    return v
