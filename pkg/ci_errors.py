"""
工具集的异常定义

所有异常都继承自ValueError，调用方仍然可以用 except ValueError 统一捕获
"""


class ToricToolkitError(ValueError):
    """工具集所有领域异常的基类"""


class AmbientMismatch(ToricToolkitError):
    """向量或矩阵所在的环境空间维数不一致"""


class ZeroVector(ToricToolkitError):
    """要求非零向量的地方传入了零向量"""


class ZeroGenerator(ToricToolkitError):
    """生成元集合中出现了零向量"""


class NotPointed(ToricToolkitError):
    """锥不是强凸的（包含一条直线）"""


class NoMultipleExists(ToricToolkitError):
    """不存在正整数t使得t·b落在半群中"""


class ScanLimitExceeded(NoMultipleExists):
    """倍数扫描超过了配置的上限，仍未观察到完整的尾部"""


class BadPartition(ToricToolkitError):
    """指标集划分不合法（为空、相交或没有覆盖全部指标）"""


class MalformedTree(ToricToolkitError):
    """分解树的结构与生成元集合不匹配"""


class TooManyGenerators(ToricToolkitError):
    """生成元个数超过判定过程允许的上限"""


class BadDimension(ToricToolkitError):
    """维数参数不合法"""


class DimensionOne(ToricToolkitError):
    """一维锥不适用 2n-2 上界"""


class NotCICone(ToricToolkitError):
    """锥不是完全交锥"""


class PartNotCI(ToricToolkitError):
    """构造见证时某一部分不是完全交"""


class NoSharedLine(ToricToolkitError):
    """两部分的格交不是秩1，或生成元不同时落在两个锥中"""


class NoCoprimeMultiples(NoSharedLine):
    """两边倍数的步长与g不互素，取不到两两互素的μ、τ"""


class GenerationFailed(ToricToolkitError):
    """随机实例生成在重试上限内没有成功"""


class BudgetExceeded(ToricToolkitError):
    """Gröbner计算超出预算，实例对于验证器来说过大"""


class InstanceError(ToricToolkitError):
    """实例文件的输入错误"""


class ParseError(InstanceError):
    """实例文件无法解析"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{message} (第{line}行，第{column}列)"
        super().__init__(message)


class ZeroRow(InstanceError):
    """实例文件中出现了全零行"""


class RaggedRows(InstanceError):
    """实例文件中各行长度不一致"""


class EmptyInput(InstanceError):
    """实例文件中没有任何生成元"""
