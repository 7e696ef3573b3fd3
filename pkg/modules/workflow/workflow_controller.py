#!/usr/bin/env python3
"""
工作流控制器
协调脚本与测试套件的处理流程：解析 -> 执行 -> 保存报告
"""

import os
import logging
from pathlib import Path
from typing import Dict, Optional

from ..common.errors import DslSyntaxError
from ..common.runtime import PROJECT_ROOT, RunConfig, load_project_config, setup_logging
from ..cli import parse, run, run_suite


class WorkflowController:
    """工作流控制器"""

    def __init__(self, config: Optional[RunConfig] = None):
        """
        初始化工作流控制器
        :param config: 运行配置；缺省时从 config.env 与环境变量读取
        """
        load_project_config()
        setup_logging('WORKFLOW_CONTROLLER', 'workflow_controller')
        self.logger = logging.getLogger('WorkflowController')

        self.config = config or RunConfig.from_env()
        self.output_dir = Path(os.getenv('INDSHEAF_OUTPUT_DIR', str(PROJECT_ROOT / 'output')))

        self.logger.info(f"工作流控制器已初始化 (field={self.config.field}, trunc={self.config.truncation})")

    def _save_report(self, text: str, name: str, out: Optional[str] = None) -> str:
        """
        保存报告
        :param text: 报告文本
        :param name: 报告名（脚本文件名或套件名）
        :param out: 指定的输出路径；为空时写到 output/reports/report_<name>.txt
        :return: 保存路径
        """
        if out:
            path = Path(out)
        else:
            path = self.output_dir / 'reports' / f"report_{name}.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
        self.logger.info(f"报告已保存: {path}")
        return str(path)

    def process_script(self, text: str, name: str = "script", out: Optional[str] = None,
                       save: bool = True) -> Dict:
        """
        解析并执行脚本
        :param text: 脚本全文
        :param name: 报告名
        :param out: 报告路径
        :param save: 是否写报告文件
        :return: 处理结果；passed 为 False 表示有查询失败或运行时错误
        """
        try:
            self.logger.info(f"开始处理脚本: {name}")

            # 步骤1: 解析
            self.logger.info("步骤1: 解析")
            script = parse(text)

            # 步骤2: 执行
            self.logger.info(f"步骤2: 执行 {len(script.statements)} 条语句")
            report = run(script, self.config)
            report_text = report.text()

            # 步骤3: 保存
            result = {
                "success": True,
                "name": name,
                "passed": not report.failed,
                "report": report_text,
                "failed_records": [r.index for r in report.failures],
                "error": str(report.error) if report.error else None,
            }
            if save:
                result["report_file"] = self._save_report(report_text, name, out)
            return result

        except DslSyntaxError as e:
            self.logger.error(f"脚本语法错误: {e}")
            return {
                "success": False,
                "name": name,
                "passed": False,
                "error": str(e),
                "line": e.line,
                "column": e.column,
            }
        except Exception as e:
            self.logger.error(f"脚本处理失败: {e}")
            return {
                "success": False,
                "name": name,
                "passed": False,
                "error": str(e),
            }

    def process_suite(self, suite: str, out: Optional[str] = None, progress: bool = False,
                      save: bool = True) -> Dict:
        """
        运行测试套件
        :param suite: 套件名（all 表示全部）
        :param progress: 是否在 stderr 显示进度条
        """
        try:
            self.logger.info(f"开始运行套件: {suite} (seed={self.config.seed})")
            result = run_suite(suite, self.config, progress)
            report_text = result.text() + "\n"
            outcome = {
                "success": True,
                "name": suite,
                "passed": result.passed,
                "report": report_text,
                "error": None,
            }
            if save:
                outcome["report_file"] = self._save_report(report_text, f"suite_{suite}", out)
            return outcome
        except Exception as e:
            self.logger.error(f"套件运行失败: {e}")
            return {
                "success": False,
                "name": suite,
                "passed": False,
                "error": str(e),
            }

    def get_workflow_status(self) -> Dict:
        """获取工作流状态"""
        return {
            "success": True,
            "config": {
                "field": self.config.field,
                "truncation": self.config.truncation,
                "seed": self.config.seed,
                "timings": self.config.timings,
            },
            "modules": {
                "linalg": "已加载",
                "space": "已加载",
                "sheaf": "已加载",
                "indcat": "已加载",
                "sixops": "已加载",
                "extend": "已加载",
                "cli": "已加载",
            },
            "message": "所有模块已就绪"
        }
