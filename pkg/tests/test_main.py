#!/usr/bin/env python3
"""
命令行入口测试：导入文件、报告写出与退出码
"""

import json
import os
import shutil
import sys
import tempfile
import unittest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../src'))

from main import EXIT_PASS, EXIT_USAGE, main
from roelab.persistence import export_object, import_object
from roelab.scenarios import PASS, ScenarioReport
from roelab.space import squares_space


class TestCommandLine(unittest.TestCase):
    """main() 的退出码"""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def _write(self, name, text):
        path = os.path.join(self.temp_dir, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path

    def test_import_files(self):
        exported = export_object(squares_space(6), os.path.join(self.temp_dir, 'space.json'))
        literal = self._write('linking.json', '{"kind": "dA", "params": {"size": 6, "A": [2]}}')
        self.assertEqual(main(['--import-file', str(exported), '--import-file', literal]), EXIT_PASS)

    def test_invalid_files_are_usage_errors(self):
        files = {
            'triangle.json': '{"matrix": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}',
            'syntax.json': '{"labels": [1, 2,]}',
        }
        for name, text in files.items():
            with self.subTest(file=name):
                self.assertEqual(main(['--import-file', self._write(name, text)]), EXIT_USAGE)
        self.assertEqual(main(['--import-file', os.path.join(self.temp_dir, 'missing.json')]), EXIT_USAGE)

    def test_json_report_round_trips(self):
        code = main(['--scenario', 'lemma7', '--size', '6', '--out', self.temp_dir])
        self.assertEqual(code, EXIT_PASS)
        report = import_object(os.path.join(self.temp_dir, 'lemma7.json'))
        self.assertIsInstance(report, ScenarioReport)
        self.assertEqual((report.status, report.params['size']), (PASS, 6))

        with open(os.path.join(self.temp_dir, 'lemma7.json'), encoding='utf-8') as f:
            self.assertEqual(json.load(f)['schema'], 'v1')

    def test_parameter_errors_exit_2(self):
        for argv in (['--scenario', 'lemma7', '--size', '0'],
                     ['--scenario', 'prop5', '--copies', '0'],
                     ['--scenario', 'lemma1', '--size', '501'],
                     ['--scenario', 'nope']):
            with self.subTest(argv=argv):
                self.assertEqual(main(argv + ['--out', self.temp_dir]), EXIT_USAGE)


if __name__ == '__main__':
    unittest.main()
