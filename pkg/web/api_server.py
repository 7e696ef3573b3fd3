#!/usr/bin/env python3
"""
Ind 层计算 API 服务器
提供 RESTful API 接口：运行脚本、运行测试套件
"""

import os
import logging
import sys
from datetime import datetime
from flask import Flask, request, jsonify

# 添加项目根目录到Python路径
project_root = os.path.join(os.path.dirname(__file__), '..')
sys.path.insert(0, project_root)

from modules.common.runtime import RunConfig, load_project_config, setup_logging
from modules.workflow import WorkflowController


class IndSheafAPI:
    """Ind 层计算 API 服务器"""

    def __init__(self, config: RunConfig = None):
        """
        初始化API服务器
        :param config: 默认运行配置；请求体中的 field/trunc/seed 覆盖它
        """
        load_project_config()
        setup_logging('API_SERVER', 'api_server')
        self.logger = logging.getLogger('IndSheafAPI')

        self.config = config or RunConfig.from_env()

        # 初始化Flask应用
        self.app = Flask(__name__)
        self.setup_routes()

        self.logger.info("API服务器已初始化")

    def _config_from(self, data: dict) -> RunConfig:
        trunc = data.get('trunc')
        seed = data.get('seed')
        return self.config.override(
            field=data.get('field'),
            truncation=int(trunc) if trunc is not None else None,
            seed=int(seed) if seed is not None else None,
        )

    def setup_routes(self):
        """设置API路由"""

        @self.app.route('/api/health', methods=['GET'])
        def health_check():
            """健康检查接口"""
            try:
                controller = WorkflowController(self.config)
                status = {
                    'status': 'healthy',
                    'timestamp': datetime.now().isoformat(),
                    'version': '1.0.0',
                    'workflow': controller.get_workflow_status(),
                }
                return jsonify(status)
            except Exception as e:
                return jsonify({
                    'status': 'unhealthy',
                    'error': str(e),
                    'timestamp': datetime.now().isoformat()
                }), 500

        @self.app.route('/api/run', methods=['POST'])
        def run_script():
            """运行脚本接口 - 请求体 {"script": "...", "field": "q", "trunc": 16, "seed": 0}"""
            try:
                data = request.get_json(silent=True)
                if not data or 'script' not in data:
                    return jsonify({
                        'success': False,
                        'error': '缺少script参数'
                    }), 400

                self.logger.info(f"收到脚本请求: {len(data['script'])} 字符")
                controller = WorkflowController(self._config_from(data))
                result = controller.process_script(data['script'], data.get('name', 'api'), save=False)

                if result.get('success'):
                    self.logger.info(f"脚本执行完成: passed={result['passed']}")
                    return jsonify(result)
                self.logger.error(f"脚本执行失败: {result.get('error')}")
                return jsonify(result), 400

            except Exception as e:
                error_msg = f"脚本处理异常: {str(e)}"
                self.logger.error(error_msg)
                return jsonify({
                    'success': False,
                    'error': error_msg
                }), 500

        @self.app.route('/api/suite', methods=['POST'])
        def run_suite():
            """运行测试套件接口 - 请求体 {"suite": "adjunctions", "seed": 1}"""
            try:
                data = request.get_json(silent=True)
                if not data or 'suite' not in data:
                    return jsonify({
                        'success': False,
                        'error': '缺少suite参数'
                    }), 400

                self.logger.info(f"收到套件请求: {data['suite']}")
                controller = WorkflowController(self._config_from(data))
                result = controller.process_suite(data['suite'], save=False)

                if result.get('success'):
                    return jsonify(result)
                self.logger.error(f"套件运行失败: {result.get('error')}")
                return jsonify(result), 400

            except Exception as e:
                error_msg = f"套件处理异常: {str(e)}"
                self.logger.error(error_msg)
                return jsonify({
                    'success': False,
                    'error': error_msg
                }), 500

    def run(self, host='0.0.0.0', port=8000, debug=False):
        """启动API服务器"""
        self.logger.info(f"启动API服务器，地址: {host}:{port}")
        self.app.run(host=host, port=port, debug=debug)
