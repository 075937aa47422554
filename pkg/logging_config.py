import os
import logging
import datetime

# 所有经由 setup_logger 创建的logger名称，便于统一调整级别
_TOOLKIT_LOGGERS = set()


def setup_logger(logger_name="app", log_dir=None, log_level="WARNING") -> logging.Logger:
    """设置日志记录器

    Args:
        logger_name (str): 日志记录器名称
        log_dir (str): 日志文件保存目录，为空时读取环境变量LOG_DIR，仍为空则不写文件
        log_level (str): 日志级别，默认为WARNING，环境变量LOG_LEVEL优先

    Returns:
        logging.Logger: 配置好的日志记录器
    """
    # 创建logger实例
    app_logger = logging.getLogger(logger_name)

    # 设置日志级别
    level = os.getenv("LOG_LEVEL", log_level).upper()
    if not isinstance(getattr(logging, level, None), int):
        level = log_level
    app_logger.setLevel(getattr(logging, level))

    # 防止日志重复
    if app_logger.hasHandlers():
        app_logger.handlers.clear()

    # 创建格式化器
    formatter = logging.Formatter(fmt="%(asctime)s [%(levelname)s] %(name)s: %(message)s", datefmt="%Y-%m-%d %H:%M:%S")

    # 只有显式配置了日志目录才写文件
    log_dir = log_dir or os.getenv("LOG_DIR", "")
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        log_file = os.path.join(log_dir, f"{logger_name}_{datetime.datetime.now().strftime('%Y%m%d')}.log")

        file_handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
        file_handler.setFormatter(formatter)
        file_handler.setLevel(getattr(logging, level))
        app_logger.addHandler(file_handler)

    # 控制台处理器输出到stderr，stdout留给报告
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    console_handler.setLevel(getattr(logging, level))
    app_logger.addHandler(console_handler)

    # 设置不传播到父logger
    app_logger.propagate = False

    _TOOLKIT_LOGGERS.add(logger_name)
    return app_logger


def set_level(log_level: str) -> None:
    """统一调整所有工具集logger及其处理器的级别"""
    level = getattr(logging, log_level.upper())
    for name in _TOOLKIT_LOGGERS:
        toolkit_logger = logging.getLogger(name)
        toolkit_logger.setLevel(level)
        for handler in toolkit_logger.handlers:
            handler.setLevel(level)
