"""
工作流模块
脚本与测试套件的处理流程协调
"""

from .workflow_controller import WorkflowController

__all__ = ['WorkflowController']
