"""
配置管理模块
"""
import os

from dotenv import load_dotenv

DEFAULTS = {
    "TORIC_MAX_GENS": 16,
    "TORIC_ORACLE_BUDGET": 200000,
    "TORIC_ORACLE_MAX_GENS": 8,
    "TORIC_ORACLE_MAX_ENTRY": 30,
    "TORIC_TRACE_SCAN_LIMIT": 4096,
    "TORIC_GENERATION_RETRIES": 25,
}


def _int_env(name: str) -> int:
    default = DEFAULTS[name]
    try:
        # pylint: disable=invalid-envvar-default
        value = int(os.getenv(name, default))
        if value <= 0:
            raise ValueError(f"{name} 必须为正整数")
        return value
    except Exception:
        return default


class Config:
    """配置类，用于管理所有配置信息（单例模式）"""
    _instance = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        load_dotenv()

        # 两个判定过程允许的最大生成元个数（划分搜索为3^m量级）
        self.max_gens = _int_env("TORIC_MAX_GENS")

        # toric理想验证器的预算与规模限制
        self.oracle_budget = _int_env("TORIC_ORACLE_BUDGET")
        self.oracle_max_gens = _int_env("TORIC_ORACLE_MAX_GENS")
        self.oracle_max_entry = _int_env("TORIC_ORACLE_MAX_ENTRY")

        self.trace_scan_limit = _int_env("TORIC_TRACE_SCAN_LIMIT")
        self.generation_retries = _int_env("TORIC_GENERATION_RETRIES")

        self._initialized = True

    @classmethod
    def reload(cls) -> "Config":
        """重新读取环境变量（主要供测试使用）"""
        cls._instance = None
        cls._initialized = False
        return cls()
