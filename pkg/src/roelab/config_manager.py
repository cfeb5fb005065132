#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理器
提供统一的配置加载、验证和管理功能

- 支持 YAML 与 JSON 两种配置格式（按后缀识别）
- 内置默认值，文件中的值按分节覆盖默认值
- 按分节注册验证器，验证失败时保留旧配置
"""

import copy
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import yaml

from .errors import ConfigurationError


class ConfigFormat(Enum):
    """配置文件格式枚举"""
    JSON = "json"
    YAML = "yaml"
    YAML_ALT = "yml"


@dataclass
class ValidationResult:
    """配置验证结果"""
    is_valid: bool = True
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    config_path: Optional[str] = None


@dataclass(frozen=True)
class NormSettings:
    """算子范数计算参数（来自 numerics 分节）"""
    tolerance: float = 1e-10
    dense_threshold: int = 64
    max_iterations: int = 100_000
    seed: int = 20240521

    @classmethod
    def from_configuration(cls, numerics: Dict[str, Any]) -> "NormSettings":
        return cls(
            tolerance=float(numerics.get('norm_tolerance', cls.tolerance)),
            dense_threshold=int(numerics.get('dense_threshold', cls.dense_threshold)),
            max_iterations=int(numerics.get('max_iterations', cls.max_iterations)),
            seed=int(numerics.get('norm_seed', cls.seed)),
        )


DEFAULT_CONFIGURATION: Dict[str, Any] = {
    'system': {
        'name': 'roelab',
        'version': '1.0.0',
        'log_level': 'INFO',
        'log_dir': 'logs',
    },
    'numerics': {
        'norm_tolerance': 1e-10,
        'dense_threshold': 64,
        'max_iterations': 100_000,
        'norm_seed': 20240521,
        'validation_limit': 2048,
    },
    'limits': {
        'max_base_size': 500,
        'max_copies': 64,
    },
    'scenarios': {
        'size': None,
        'copies': None,
        'seed': 7,
        'tol': 1e-8,
        'jobs': 1,
    },
    'output': {
        'dir': 'reports',
        'format': 'json',
    },
}

VALID_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']
VALID_OUTPUT_FORMATS = ['json', 'csv', 'text']


class ConfigManager:
    """
    配置管理器类
    提供统一的配置加载、验证与分节访问

    主要功能：
    - 多种配置文件格式支持（JSON、YAML）
    - 默认值合并
    - 分节验证器
    - 点号路径访问
    """

    def __init__(self, config_path: Optional[str] = None, validation_enabled: bool = True):
        """
        初始化配置管理器

        Args:
            config_path: 配置文件路径，为 None 时仅使用默认值
            validation_enabled: 是否启用配置验证
        """
        self.config_path = config_path
        self.validation_enabled = validation_enabled

        self.config_data: Dict[str, Any] = copy.deepcopy(DEFAULT_CONFIGURATION)
        self.validation_rules: Dict[str, Callable[[Dict[str, Any]], List[str]]] = {}

        self.stats = {
            'load_count': 0,
            'validation_count': 0,
            'error_count': 0,
            'start_time': datetime.now().isoformat(),
        }

        self.logger = logging.getLogger(f"{__name__}.ConfigManager")
        self._register_default_validators()
        self.logger.debug("配置管理器初始化完成")

    def load_configuration(self, config_path: Optional[str] = None) -> bool:
        """
        加载配置文件并与默认值合并

        Args:
            config_path: 配置文件路径，为 None 时使用初始化时的路径

        Returns:
            bool: 加载成功返回 True
        """
        if config_path:
            self.config_path = config_path
        if not self.config_path:
            self.logger.info("未指定配置文件，使用默认配置")
            return True

        config_file = Path(self.config_path)
        if not config_file.exists():
            self.logger.error(f"配置文件不存在: {self.config_path}")
            self.stats['error_count'] += 1
            return False

        try:
            file_format = self._detect_file_format(config_file)
            with open(config_file, 'r', encoding='utf-8') as f:
                if file_format == ConfigFormat.JSON:
                    loaded = json.load(f)
                else:
                    loaded = yaml.safe_load(f)
        except json.JSONDecodeError as e:
            self.logger.error(f"JSON解析失败: {e}")
            self.stats['error_count'] += 1
            return False
        except yaml.YAMLError as e:
            self.logger.error(f"YAML解析失败: {e}")
            self.stats['error_count'] += 1
            return False
        except OSError as e:
            self.logger.error(f"配置文件读取失败: {e}")
            self.stats['error_count'] += 1
            return False

        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            self.logger.error("配置文件顶层必须是字典")
            self.stats['error_count'] += 1
            return False

        old_config = self.config_data
        self.config_data = self._merge_with_defaults(loaded)

        if self.validation_enabled:
            result = self.validate_configuration()
            if not result.is_valid:
                self.logger.error(f"配置验证失败: {result.errors}")
                self.config_data = old_config
                return False

        self.stats['load_count'] += 1
        self.logger.info(f"配置文件加载成功: {self.config_path}")
        return True

    def save_configuration(self, config_path: Optional[str] = None) -> bool:
        """
        保存配置文件

        Args:
            config_path: 保存路径，为 None 时使用当前配置路径

        Returns:
            bool: 保存成功返回 True
        """
        target = config_path or self.config_path
        if not target:
            self.logger.error("未指定保存路径")
            return False

        save_path = Path(target)
        try:
            save_path.parent.mkdir(parents=True, exist_ok=True)
            file_format = self._detect_file_format(save_path)
            with open(save_path, 'w', encoding='utf-8') as f:
                if file_format == ConfigFormat.JSON:
                    json.dump(self.config_data, f, indent=2, ensure_ascii=False)
                else:
                    yaml.safe_dump(self.config_data, f, default_flow_style=False, allow_unicode=True)
        except OSError as e:
            self.logger.error(f"配置文件保存失败: {e}")
            return False

        self.logger.info(f"配置文件已保存: {save_path}")
        return True

    def validate_configuration(self, config_data: Optional[Dict[str, Any]] = None) -> ValidationResult:
        """
        验证配置数据

        Args:
            config_data: 要验证的配置数据，为 None 时使用当前配置

        Returns:
            ValidationResult: 验证结果
        """
        self.stats['validation_count'] += 1
        if config_data is None:
            config_data = self.config_data

        result = ValidationResult(config_path=self.config_path)
        if not isinstance(config_data, dict):
            result.is_valid = False
            result.errors.append("配置数据必须是字典类型")
            return result

        for rule_name, validator in self.validation_rules.items():
            try:
                result.errors.extend(validator(config_data))
            except (TypeError, ValueError, AttributeError) as e:
                result.errors.append(f"验证器'{rule_name}'无法解析配置: {e}")

        for section in config_data:
            if section not in DEFAULT_CONFIGURATION:
                result.warnings.append(f"未知配置分节: {section}")

        result.is_valid = not result.errors
        if result.is_valid:
            self.logger.debug("配置验证通过")
        return result

    def require_valid(self) -> None:
        """验证当前配置，失败时抛出 ConfigurationError"""
        result = self.validate_configuration()
        if not result.is_valid:
            raise ConfigurationError("; ".join(result.errors))

    def get_configuration_value(self, key_path: str, default_value: Any = None) -> Any:
        """
        获取配置值（支持点号路径）

        Args:
            key_path: 配置键路径（如 'numerics.norm_tolerance'）
            default_value: 默认值

        Returns:
            Any: 配置值，不存在返回默认值
        """
        value: Any = self.config_data
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default_value
        return value

    def set_configuration_value(self, key_path: str, value: Any) -> bool:
        """
        设置配置值（支持点号路径）

        Args:
            key_path: 配置键路径
            value: 配置值

        Returns:
            bool: 设置成功返回 True
        """
        keys = key_path.split('.')
        node = self.config_data
        for key in keys[:-1]:
            child = node.setdefault(key, {})
            if not isinstance(child, dict):
                self.logger.error(f"设置配置值失败: {key_path} 路径中 {key} 不是分节")
                return False
            node = child
        node[keys[-1]] = value
        self.logger.debug(f"配置值已设置: {key_path} = {value}")
        return True

    def get_system_configuration(self) -> Dict[str, Any]:
        return self.get_configuration_value('system', {})

    def get_numerics_configuration(self) -> Dict[str, Any]:
        return self.get_configuration_value('numerics', {})

    def get_limits_configuration(self) -> Dict[str, Any]:
        return self.get_configuration_value('limits', {})

    def get_scenario_configuration(self) -> Dict[str, Any]:
        return self.get_configuration_value('scenarios', {})

    def get_output_configuration(self) -> Dict[str, Any]:
        return self.get_configuration_value('output', {})

    def get_norm_settings(self) -> NormSettings:
        """把 numerics 分节转换为 NormSettings"""
        return NormSettings.from_configuration(self.get_numerics_configuration())

    def get_log_level(self) -> str:
        return str(self.get_configuration_value('system.log_level', 'INFO')).upper()

    def register_validation_rule(self, rule_name: str, validator_func: Callable[[Dict[str, Any]], List[str]]):
        """
        注册验证规则

        Args:
            rule_name: 规则名称
            validator_func: 验证函数，返回错误信息列表
        """
        self.validation_rules[rule_name] = validator_func
        self.logger.debug(f"验证规则已注册: {rule_name}")

    def get_statistics(self) -> Dict[str, Any]:
        """获取统计信息"""
        return {
            'load_count': self.stats['load_count'],
            'validation_count': self.stats['validation_count'],
            'error_count': self.stats['error_count'],
            'config_path': self.config_path,
            'validation_enabled': self.validation_enabled,
        }

    def _merge_with_defaults(self, loaded: Dict[str, Any]) -> Dict[str, Any]:
        """按分节合并：文件中的键覆盖默认值，未知分节原样保留"""
        merged = copy.deepcopy(DEFAULT_CONFIGURATION)
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(merged.get(section), dict):
                merged[section].update(values)
            else:
                merged[section] = values
        return merged

    def _detect_file_format(self, file_path: Path) -> ConfigFormat:
        suffix = file_path.suffix.lower()
        if suffix == '.json':
            return ConfigFormat.JSON
        if suffix == '.yml':
            return ConfigFormat.YAML_ALT
        # 默认使用YAML格式
        return ConfigFormat.YAML

    def _register_default_validators(self):
        """注册默认验证器"""

        def validate_system_config(config: Dict[str, Any]) -> List[str]:
            errors = []
            log_level = str(config.get('system', {}).get('log_level', 'INFO')).upper()
            if log_level not in VALID_LOG_LEVELS:
                errors.append(f"日志级别无效，必须是: {VALID_LOG_LEVELS}")
            return errors

        def validate_numerics_config(config: Dict[str, Any]) -> List[str]:
            errors = []
            numerics = config.get('numerics', {})
            value = numerics.get('norm_tolerance')
            if not isinstance(value, (int, float)) or value <= 0:
                errors.append("numerics.norm_tolerance 必须是正数")
            for key in ('dense_threshold', 'max_iterations', 'validation_limit'):
                value = numerics.get(key)
                if not isinstance(value, int) or value < 1:
                    errors.append(f"numerics.{key} 必须是正整数")
            return errors

        def validate_limits_config(config: Dict[str, Any]) -> List[str]:
            errors = []
            limits = config.get('limits', {})
            for key in ('max_base_size', 'max_copies'):
                value = limits.get(key)
                if not isinstance(value, int) or value < 1:
                    errors.append(f"limits.{key} 必须是正整数")
            return errors

        def validate_output_config(config: Dict[str, Any]) -> List[str]:
            errors = []
            fmt = config.get('output', {}).get('format', 'json')
            if fmt not in VALID_OUTPUT_FORMATS:
                errors.append(f"输出格式无效，必须是: {VALID_OUTPUT_FORMATS}")
            jobs = config.get('scenarios', {}).get('jobs', 1)
            if not isinstance(jobs, int) or jobs < 1:
                errors.append("scenarios.jobs 必须是正整数")
            return errors

        self.register_validation_rule('system', validate_system_config)
        self.register_validation_rule('numerics', validate_numerics_config)
        self.register_validation_rule('limits', validate_limits_config)
        self.register_validation_rule('output', validate_output_config)
