#!/usr/bin/env python3
"""
Roe 模实验室主程序 - 场景运行与报告输出
roelab main program - runs the finite-truncation scenarios and writes reports

退出码: 0 全部通过, 1 有检查失败, 2 用法/IO/配置错误, 3 仅有文字不一致标记
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# 添加src目录到Python路径
current_dir = Path(__file__).parent
src_dir = current_dir / "src"
sys.path.insert(0, str(src_dir))

from roelab.config_manager import VALID_LOG_LEVELS, VALID_OUTPUT_FORMATS, ConfigManager
from roelab.errors import ConvergenceError, InvalidParameterError, RoeLabError, UnknownScenarioError
from roelab.persistence import describe_object, export_object, import_object
from roelab.scenarios import FAIL, FLAGGED, ScenarioReport, ScenarioRunner

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_FLAGGED = 3


class RoeLabApplication:
    """场景运行程序主类，负责配置、日志、运行与报告写出"""

    def __init__(self, args: argparse.Namespace):
        """初始化应用

        Args:
            args: 命令行参数
        """
        self.args = args
        self.logger = logging.getLogger(f"{__name__}.RoeLabApplication")
        self.config_manager = ConfigManager(validation_enabled=True)
        self.runner: Optional[ScenarioRunner] = None
        self.reports: List[ScenarioReport] = []

    def _setup_logging(self, log_level: str = "INFO") -> None:
        """设置日志配置

        Args:
            log_level: 日志级别，默认为 "INFO"
        """
        log_dir = Path(self.config_manager.get_configuration_value('system.log_dir', 'logs'))
        if not log_dir.is_absolute():
            log_dir = current_dir / log_dir
        log_dir.mkdir(parents=True, exist_ok=True)

        level = getattr(logging, log_level.upper(), logging.INFO)

        logging.basicConfig(
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[
                logging.FileHandler(log_dir / "roelab.log", encoding='utf-8'),
                logging.StreamHandler(sys.stdout)
            ]
        )

    def _overrides(self) -> Dict[str, Any]:
        """命令行中显式给出的场景参数"""
        overrides = {
            'size': self.args.size,
            'copies': self.args.copies,
            'seed': self.args.seed,
            'tol': self.args.tol,
        }
        return {key: value for key, value in overrides.items() if value is not None}

    def initialize(self) -> bool:
        """加载配置并初始化运行器

        Returns:
            bool: 初始化是否成功
        """
        if self.args.config and not self.config_manager.load_configuration(self.args.config):
            logging.basicConfig(level=logging.ERROR)
            self.logger.error(f"配置文件加载失败: {self.args.config}")
            return False

        if self.args.out:
            self.config_manager.set_configuration_value('output.dir', self.args.out)
        if self.args.format:
            self.config_manager.set_configuration_value('output.format', self.args.format)
        if self.args.jobs:
            self.config_manager.set_configuration_value('scenarios.jobs', self.args.jobs)

        self._setup_logging(self.args.log_level or self.config_manager.get_log_level())

        validation = self.config_manager.validate_configuration()
        if not validation.is_valid:
            self.logger.error("配置验证失败:")
            for error in validation.errors:
                self.logger.error(f"  - {error}")
            return False
        for warning in validation.warnings:
            self.logger.warning(f"配置警告: {warning}")

        self.runner = ScenarioRunner(self.config_manager)
        self.logger.info(f"roelab 启动, 版本 {self.config_manager.get_configuration_value('system.version')}")
        return True

    def _selected_scenarios(self) -> List[str]:
        requested = self.args.scenario or ['all']
        if 'all' in requested:
            return self.runner.scenario_names
        return sorted(set(requested))

    def run(self) -> int:
        """运行所选场景并写出报告

        Returns:
            int: 退出码
        """
        if self.args.list:
            for name in self.runner.scenario_names:
                print(name)
            return EXIT_PASS

        if self.args.import_file:
            if not self._import_files():
                return EXIT_USAGE
            if not self.args.scenario:
                return EXIT_PASS

        names = self._selected_scenarios()
        jobs = int(self.config_manager.get_configuration_value('scenarios.jobs', 1))
        try:
            self.reports = self.runner.run_many(names, self._overrides(), jobs=jobs)
        except (UnknownScenarioError, InvalidParameterError) as e:
            self.logger.error(f"参数错误: {e}")
            return EXIT_USAGE
        except ConvergenceError as e:
            self.logger.error(f"范数计算未收敛: {e} (残差 {e.residual:.3e})")
            return EXIT_FAIL
        except RoeLabError as e:
            self.logger.error(f"场景运行失败: {e}")
            return EXIT_FAIL

        output = self.config_manager.get_output_configuration()
        out_dir = Path(output.get('dir', 'reports'))
        fmt = output.get('format', 'json')
        try:
            for report in self.reports:
                if fmt == 'json':
                    path = export_object(report, out_dir / f"{report.scenario}.json")
                else:
                    path = report.write(out_dir, fmt)
                self.logger.info(f"报告已写出: {path} ({report.status})")
        except OSError as e:
            self.logger.error(f"报告写出失败: {e}")
            return EXIT_USAGE

        return self._exit_code()

    def _import_files(self) -> bool:
        """导入并验证 --import-file 给出的对象文件

        Returns:
            bool: 全部文件是否有效
        """
        valid = True
        for path in self.args.import_file:
            try:
                obj = import_object(path)
            except (RoeLabError, OSError) as e:
                self.logger.error(f"导入失败 {path}: {e}")
                valid = False
                continue
            self.logger.info(f"已导入 {path}: {describe_object(obj)}")
        return valid

    def _exit_code(self) -> int:
        statuses = {report.status for report in self.reports}
        for report in self.reports:
            self.logger.info(f"{report.scenario}: {report.status} ({len(report.checks)} 项检查)")
        if FAIL in statuses:
            return EXIT_FAIL
        if FLAGGED in statuses:
            return EXIT_FLAGGED
        return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    """命令行参数定义"""
    parser = argparse.ArgumentParser(
        prog='roelab',
        description='Finite-truncation scenarios for Hilbert C*-modules over uniform Roe algebras',
    )
    parser.add_argument('--scenario', action='append',
                        help="场景名（可重复），'all' 运行全部")
    parser.add_argument('--size', type=int, help='基本空间点数')
    parser.add_argument('--copies', type=int, help='副本数 N')
    parser.add_argument('--seed', type=int, help='随机种子')
    parser.add_argument('--tol', type=float, help='范数恒等式的相对容差')
    parser.add_argument('--out', help='报告输出目录')
    parser.add_argument('--format', choices=VALID_OUTPUT_FORMATS, help='报告格式')
    parser.add_argument('--config', help='配置文件 (YAML 或 JSON)')
    parser.add_argument('--jobs', type=int, help='并行运行的场景数')
    parser.add_argument('--import-file', action='append', metavar='PATH',
                        help='导入并验证对象文件（可重复）；未给出 --scenario 时只做导入')
    parser.add_argument('--list', action='store_true', help='列出全部场景名')
    parser.add_argument('--log-level', choices=VALID_LOG_LEVELS, help='日志级别')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数

    Returns:
        int: 退出码
    """
    args = build_parser().parse_args(argv)
    if args.jobs is not None and args.jobs < 1:
        print("--jobs 必须 ≥ 1", file=sys.stderr)
        return EXIT_USAGE

    application = RoeLabApplication(args)
    try:
        if not application.initialize():
            return EXIT_USAGE
        return application.run()
    except KeyboardInterrupt:
        logging.warning("用户中断程序")
        return EXIT_FAIL
    finally:
        logging.getLogger(__name__).debug("roelab 结束")


if __name__ == "__main__":
    sys.exit(main())
