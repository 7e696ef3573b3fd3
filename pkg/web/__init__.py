"""
Web服务模块
包含API服务器
"""

from .api_server import IndSheafAPI

__all__ = ['IndSheafAPI']
