#!/usr/bin/env python3
"""
运行配置与日志
从 config.env 和环境变量读取配置，按组件初始化日志文件
"""

import os
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


def load_project_config() -> None:
    """加载项目根目录下的 config.env（文件不存在时只使用环境变量）"""
    config_path = PROJECT_ROOT / 'config.env'
    load_dotenv(config_path)


def setup_logging(component: str, log_name: str) -> logging.Logger:
    """
    初始化组件日志
    :param component: 日志格式中的组件标签，例如 SCRIPT_RUNNER
    :param log_name: 日志文件名（不含扩展名）与 logger 名称
    :return: logger
    """
    log_dir = Path(os.getenv("INDSHEAF_LOG_DIR", str(PROJECT_ROOT / 'logs')))
    log_dir.mkdir(parents=True, exist_ok=True)

    logging.basicConfig(
        level=logging.INFO,
        format=f'%(asctime)s - {component} - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_dir / f'{log_name}.log', encoding='utf-8'),
            logging.StreamHandler()
        ]
    )
    return logging.getLogger(log_name)


@dataclass(frozen=True)
class RunConfig:
    """脚本与测试套件的运行配置"""
    field: str = "q"
    truncation: int = 16
    seed: int = 0
    timings: bool = False

    @classmethod
    def from_env(cls) -> "RunConfig":
        """从 config.env / 环境变量构造"""
        load_project_config()
        return cls(
            field=os.getenv("INDSHEAF_FIELD", "q"),
            truncation=int(os.getenv("INDSHEAF_TRUNCATION", "16")),
            seed=int(os.getenv("INDSHEAF_SEED", "0")),
            timings=os.getenv("INDSHEAF_TIMINGS", "0") == "1",
        )

    def override(self, field: Optional[str] = None, truncation: Optional[int] = None,
                 seed: Optional[int] = None, timings: Optional[bool] = None) -> "RunConfig":
        """命令行参数覆盖配置文件的值"""
        changes = {}
        if field is not None:
            changes["field"] = field
        if truncation is not None:
            changes["truncation"] = truncation
        if seed is not None:
            changes["seed"] = seed
        if timings is not None:
            changes["timings"] = timings
        return replace(self, **changes)
