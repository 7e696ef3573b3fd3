#!/usr/bin/env python3
"""
Ind 层计算项目主入口
运行脚本或测试套件并输出报告，或启动 API 服务器
"""

import os
import sys
import argparse
import logging
from pathlib import Path

from colorama import Fore, Style, init as colorama_init

# 添加项目根目录到Python路径
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from modules.common.runtime import RunConfig, load_project_config, setup_logging
from modules.workflow.workflow_controller import WorkflowController

logger = logging.getLogger('Main')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Ind-sheaves on combinatorial spaces: scripts and property suites")
    parser.add_argument('--field', help="q 或 fp:<p>（默认读取 INDSHEAF_FIELD）")
    parser.add_argument('--trunc', type=int, help="截断层数 N（默认 16）")
    parser.add_argument('--seed', type=int, help="随机种子")
    parser.add_argument('--script', help="脚本文件")
    parser.add_argument('--suite', help="测试套件名（all 表示全部）")
    parser.add_argument('--out', help="报告输出路径")
    parser.add_argument('--timings', action='store_true', help="在报告中输出每条记录的耗时")
    parser.add_argument('--serve', action='store_true', help="启动 API 服务器")
    return parser


def _summary(result: dict) -> None:
    """彩色的 PASS/FAIL 行写到 stderr，不进入报告"""
    if result.get('passed'):
        line = f"{Fore.GREEN}PASS{Style.RESET_ALL} {result['name']}"
    else:
        line = f"{Fore.RED}FAIL{Style.RESET_ALL} {result['name']}"
    if result.get('error'):
        line += f" - {result['error']}"
    if result.get('report_file'):
        line += f" ({result['report_file']})"
    print(line, file=sys.stderr)


def main(argv=None) -> int:
    """主函数；返回退出码：没有失败的查询且没有错误时为 0"""
    args = build_parser().parse_args(argv)
    colorama_init()
    try:
        load_project_config()
        setup_logging('MAIN', 'main')
        config = RunConfig.from_env().override(
            field=args.field, truncation=args.trunc, seed=args.seed, timings=True if args.timings else None)
        logger.info(f"运行配置: {config}")

        if args.serve:
            from web.api_server import IndSheafAPI

            port = int(os.getenv('WEB_PORT', 8000))
            logger.info(f"启动API服务器，端口: {port}")
            IndSheafAPI(config).run(host='0.0.0.0', port=port, debug=False)
            return 0

        if not args.script and not args.suite:
            build_parser().print_usage(sys.stderr)
            logger.error("需要 --script、--suite 或 --serve")
            return 2

        controller = WorkflowController(config)
        results = []
        if args.script:
            path = Path(args.script)
            if not path.exists():
                logger.error(f"脚本文件不存在: {path}")
                return 2
            results.append(controller.process_script(path.read_text(encoding='utf-8'), path.stem, args.out))
        if args.suite:
            out = args.out if not args.script else None
            results.append(controller.process_suite(args.suite, out, progress=True))

        for result in results:
            if result.get('report'):
                sys.stdout.write(result['report'])
            _summary(result)
        return 0 if all(r.get('success') and r.get('passed') for r in results) else 1

    except KeyboardInterrupt:
        logger.info("程序被用户中断")
        return 130
    except Exception as e:
        logger.error(f"程序运行出错: {e}")
        raise


if __name__ == "__main__":
    sys.exit(main())
