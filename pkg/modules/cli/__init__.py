"""
脚本模块
脚本语言的解析与执行、对象的文本格式、性质测试套件与报告
"""

from .builtins import BUILTINS, CONSTANTS, QUERIES, Builtin, Context
from .dsl import Script, Token, parse, parse_expression, tokenize
from .interpreter import Record, Report, ScriptRunner, canonical_transition, describe_value, run, run_text
from .serialization import FORMAT_VERSION, dumps, load_file, loads, same_structure, save_file
from .suites import SUITES, CheckTally, SuiteResult, run_suite, serialization_fixtures

__all__ = [
    'BUILTINS', 'CONSTANTS', 'QUERIES', 'Builtin', 'Context',
    'Script', 'Token', 'parse', 'parse_expression', 'tokenize',
    'Record', 'Report', 'ScriptRunner', 'canonical_transition', 'describe_value', 'run', 'run_text',
    'FORMAT_VERSION', 'dumps', 'load_file', 'loads', 'same_structure', 'save_file',
    'SUITES', 'CheckTally', 'SuiteResult', 'run_suite', 'serialization_fixtures',
]
