#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
导入导出
JSON export / import for spaces, linking metrics, multi-copy spaces,
operators, sequences, pair lists, φ maps and scenario reports.

文件格式：
- 空间        {"labels": [...]} 或 {"matrix": [[...]], "labels": [...]?}
- 链接度量    {"kind": "unit|zero|dA|point|custom", "params": {...}, "base": 空间?}
- 多副本度量  {"kind": "d0|d1|embed", "params": {"copies": N, ...}, "base": 空间?, "coords": {...}?}
- 算子        {"domain": …, "codomain": …, "entries": [[x, y, re, im], …]}
- 序列        {"domain": …, "terms": [算子, …]}
- 点对列表    [[x, y], …]；φ 为 [φ(1), φ(2), …] 或字符串 "ruler"
- 报告        ScenarioReport.to_dict()

导出的对象文件额外带 "type" 与 "schema": "v1"；导入时 "type" 可省略，
按字段推断类型。链接度量按规则 (kind + params) 写出，导入时经 build_linking 重建。
浮点数按 repr 写出，整数数据逐位往返。
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .constructions import PairList, PhiMap
from .errors import ParseError, PreconditionError, RoeLabError
from .hilbert import OperatorSequence, copy_space
from .linking import (
    EmbeddingCoordinates,
    LinkingKind,
    LinkingMetric,
    MultiCopyRule,
    MultiCopySpace,
    build_linking,
    build_multicopy,
    embedding_coords,
)
from .operator import BasisSpace, SparseOperator, from_entries
from .scenarios import ScenarioReport
from .space import FiniteMetricSpace, Subset, squares_space

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "v1"
DEFAULT_PHI_HORIZON = 64

RULE_KINDS = {kind.value for kind in (LinkingKind.UNIT, LinkingKind.ZERO, LinkingKind.DA, LinkingKind.POINT)}
LINKING_KINDS = RULE_KINDS | {LinkingKind.CUSTOM.value}
MULTICOPY_KINDS = {rule.value for rule in MultiCopyRule}

Persistable = Union[FiniteMetricSpace, LinkingMetric, MultiCopySpace, SparseOperator,
                    OperatorSequence, PairList, PhiMap, ScenarioReport]


def _envelope(kind: str, body: Dict[str, Any]) -> Dict[str, Any]:
    return {'type': kind, 'schema': SCHEMA_VERSION, **body}


def _number(value: float) -> Union[int, float]:
    value = float(value)
    return int(value) if value.is_integer() and abs(value) < 2 ** 53 else value


def _matrix_payload(matrix: np.ndarray) -> list:
    return [[_number(v) for v in row] for row in matrix]


def _space_body(space: FiniteMetricSpace) -> Dict[str, Any]:
    body: Dict[str, Any] = {'name': space.name, 'labels': [_number(v) for v in space.labels]}
    if space.kind != 'labels':
        body['matrix'] = _matrix_payload(space.matrix)
    return body


def _basis_payload(basis: BasisSpace) -> Dict[str, Any]:
    return {'name': basis.name, 'size': basis.size}


def _operator_body(T: SparseOperator) -> Dict[str, Any]:
    entries = sorted(T.entries().items())
    return {
        'domain': _basis_payload(T.domain),
        'codomain': _basis_payload(T.codomain),
        'entries': [[x, y, _number(v.real), _number(v.imag)] for (x, y), v in entries],
    }


def _coords_payload(coords: EmbeddingCoordinates) -> Dict[str, Any]:
    vectors = [[n, k, [[slot, _number(value)] for slot, value in vector]]
               for (n, k), vector in sorted(coords.coords.items())]
    return {'kind': coords.kind, 'kmax': coords.kmax, 'nmax': coords.nmax, 'vectors': vectors}


def _linking_body(metric: LinkingMetric) -> Dict[str, Any]:
    """规则型度量写 kind + params；合成、伴随与自定义度量写跨副本块"""
    params: Dict[str, Any] = {}
    if 'right_indices' in metric.params:
        params['right_indices'] = list(metric.params['right_indices'])
    if metric.kind.value in RULE_KINDS:
        if metric.kind == LinkingKind.DA:
            params['A'] = list(metric.params['A'])
        elif metric.kind in (LinkingKind.ZERO, LinkingKind.POINT):
            params['u'] = int(metric.params['u'])
        return {'kind': metric.kind.value, 'params': params, 'base': _space_body(metric.left)}

    params['cross'] = _matrix_payload(metric.cross)
    body = {'kind': LinkingKind.CUSTOM.value, 'params': params, 'base': _space_body(metric.left)}
    if metric.right != metric.left:
        body['right'] = _space_body(metric.right)
    return body


def _multicopy_body(space: MultiCopySpace) -> Dict[str, Any]:
    body = {'kind': space.rule.value, 'params': {'copies': space.copies}, 'base': _space_body(space.base)}
    if space.coords is not None:
        body['coords'] = _coords_payload(space.coords)
    return body


def to_payload(obj: Persistable) -> Any:
    """对象 → 可 JSON 序列化的结构"""
    if isinstance(obj, FiniteMetricSpace):
        return _envelope('space', _space_body(obj))
    if isinstance(obj, LinkingMetric):
        return _envelope('linking', _linking_body(obj))
    if isinstance(obj, MultiCopySpace):
        return _envelope('multicopy', _multicopy_body(obj))
    if isinstance(obj, SparseOperator):
        return _envelope('operator', _operator_body(obj))
    if isinstance(obj, OperatorSequence):
        return _envelope('sequence', {
            'domain': _basis_payload(obj.domain),
            'terms': [_operator_body(term) for term in obj.terms],
        })
    if isinstance(obj, PairList):
        return [[x, y] for x, y in obj.pairs]
    if isinstance(obj, PhiMap):
        return list(obj.values)
    if isinstance(obj, ScenarioReport):
        return obj.to_dict()
    raise PreconditionError(f"不支持导出的对象类型: {type(obj).__name__}")


# ---------------------------------------------------------------- import

def _require(data: Dict[str, Any], key: str, where: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f"{where} 缺少字段 '{key}'")
    return data[key]


def _space_from(data: Any, where: str = 'space') -> FiniteMetricSpace:
    if not isinstance(data, dict):
        raise ParseError(f"{where} 必须是对象，实际 {type(data).__name__}")
    name = str(data.get('name', 'X'))
    if 'matrix' in data:
        return FiniteMetricSpace.from_matrix(data['matrix'], labels=data.get('labels'), name=name)
    return FiniteMetricSpace.from_labels(_require(data, 'labels', where), name=name)


def _base_from(data: Dict[str, Any], params: Dict[str, Any], where: str) -> FiniteMetricSpace:
    """基本空间：顶层 base、params.base，或 params.size / params.kmax 给出的 X = {1, 4, …, size²}"""
    if 'base' in data:
        return _space_from(data['base'], f"{where}.base")
    if 'base' in params:
        return _space_from(params['base'], f"{where}.params.base")
    for key in ('size', 'kmax'):
        if key in params:
            return squares_space(int(params[key]))
    raise ParseError(f"{where} 缺少基本空间（base 或 params.size）")


def _basis_from(data: Any, default_name: str) -> BasisSpace:
    if isinstance(data, int) and not isinstance(data, bool):
        return BasisSpace(default_name, data)
    if isinstance(data, dict) and ('labels' in data or 'matrix' in data):
        return BasisSpace.of(_space_from(data), data.get('name', default_name))
    if isinstance(data, dict) and 'size' in data:
        return BasisSpace(str(data.get('name', default_name)), int(data['size']))
    raise ParseError(f"基空间必须是点数或 {{name, size}}，实际 {data!r}")


def _operator_from(data: Dict[str, Any], domain: Optional[BasisSpace] = None,
                   codomain: Optional[BasisSpace] = None) -> SparseOperator:
    if not isinstance(data, dict):
        raise ParseError(f"operator 必须是对象，实际 {type(data).__name__}")
    if 'domain' in data or domain is None:
        domain = _basis_from(_require(data, 'domain', 'operator'), 'X')
    if 'codomain' in data or codomain is None:
        codomain = _basis_from(_require(data, 'codomain', 'operator'), 'Y')
    triplets = []
    for entry in _require(data, 'entries', 'operator'):
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError(f"operator 元素必须是 [x, y, re, im]，实际 {entry}")
        x, y, real, imag = entry
        triplets.append((int(x), int(y), complex(real, imag)))
    return from_entries(domain, codomain, triplets)


def _sequence_from(data: Dict[str, Any]) -> OperatorSequence:
    domain = _basis_from(_require(data, 'domain', 'sequence'), 'X')
    terms = tuple(_operator_from(term, domain, copy_space(domain, n))
                  for n, term in enumerate(_require(data, 'terms', 'sequence'), start=1))
    return OperatorSequence(domain, terms)


def _coords_from(data: Dict[str, Any]) -> EmbeddingCoordinates:
    coords = {}
    for n, k, vector in _require(data, 'vectors', 'coords'):
        coords[(int(n), int(k))] = tuple((int(slot), float(value)) for slot, value in vector)
    return EmbeddingCoordinates(str(_require(data, 'kind', 'coords')), int(_require(data, 'kmax', 'coords')),
                                int(_require(data, 'nmax', 'coords')), coords)


def _phi_from(data: Any, horizon: int = DEFAULT_PHI_HORIZON) -> PhiMap:
    if data == 'ruler':
        return PhiMap.ruler(horizon)
    if isinstance(data, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in data):
        values = tuple(data)
        return PhiMap(values, name='ruler' if values == PhiMap.ruler(len(values)).values else 'custom')
    raise ParseError(f"φ 必须是正整数数组或 \"ruler\"，实际 {data!r}")


def _linking_from(data: Dict[str, Any]) -> LinkingMetric:
    kind = _require(data, 'kind', 'linking')
    if kind not in LINKING_KINDS:
        raise ParseError(f"未知链接度量类型: {kind}")
    params = data.get('params', {})
    if not isinstance(params, dict):
        raise ParseError("linking.params 必须是对象")
    base = _base_from(data, params, 'linking')

    if kind in RULE_KINDS:
        subset = None
        if kind == LinkingKind.DA.value:
            subset = Subset(base, frozenset(int(a) for a in _require(params, 'A', 'linking.params')))
        u = int(params['u']) if 'u' in params else None
        metric = build_linking(base, kind, u=u, subset=subset)
        if 'right_indices' in params:
            metric = metric.restrict_right(params['right_indices'])
        return metric

    cross = np.asarray(_require(params, 'cross', 'linking.params'), dtype=np.float64)
    if 'right' not in data and 'right_indices' not in params:
        return build_linking(base, kind, cross=cross)
    right = _space_from(data['right'], 'linking.right') if 'right' in data else base
    extra = {}
    if 'right_indices' in params:
        extra['right_indices'] = tuple(int(i) for i in params['right_indices'])
    metric = LinkingMetric(base, right, cross, LinkingKind.CUSTOM, extra)
    metric.require_valid()
    return metric


def _multicopy_from(data: Dict[str, Any]) -> MultiCopySpace:
    rule = _require(data, 'kind', 'multicopy')
    if rule not in MULTICOPY_KINDS:
        raise ParseError(f"未知多副本规则: {rule}")
    params = data.get('params', {})
    if not isinstance(params, dict):
        raise ParseError("multicopy.params 必须是对象")
    copies = int(data['copies'] if 'copies' in data else _require(params, 'copies', 'multicopy.params'))
    base = _base_from(data, params, 'multicopy')

    coords = None
    if 'coords' in data:
        coords = _coords_from(data['coords'])
    elif rule == MultiCopyRule.EMBEDDING.value:
        embedding = _require(params, 'embedding', 'multicopy.params')
        phi = _phi_from(params['phi'], base.size) if 'phi' in params else None
        coords = embedding_coords(embedding, base.size, copies, phi=phi)
    return build_multicopy(base, copies, rule, coords)


def infer_type(data: Any) -> str:
    """没有 "type" 字段时按字段推断对象类型"""
    if isinstance(data, str):
        return 'phi'
    if isinstance(data, list):
        return 'phi' if data and all(isinstance(v, int) for v in data) else 'pairs'
    if not isinstance(data, dict):
        raise ParseError(f"无法识别的文档: {type(data).__name__}")
    if 'type' in data:
        return str(data['type'])
    if 'scenario' in data and 'checks' in data:
        return 'report'
    if 'terms' in data:
        return 'sequence'
    if 'entries' in data:
        return 'operator'
    if data.get('kind') in MULTICOPY_KINDS:
        return 'multicopy'
    if data.get('kind') in LINKING_KINDS:
        return 'linking'
    if 'labels' in data or 'matrix' in data:
        return 'space'
    raise ParseError(f"无法从字段 {sorted(data)} 推断对象类型")


def from_payload(data: Any) -> Persistable:
    """JSON 结构 → 对象；度量在导入时检查"""
    kind = infer_type(data)
    if isinstance(data, dict):
        schema = data.get('schema', SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ParseError(f"不支持的 schema 版本: {schema}")

    if kind == 'pairs':
        return PairList(tuple((int(x), int(y)) for x, y in data))
    if kind == 'phi':
        return _phi_from(data)
    if kind == 'space':
        return _space_from(data)
    if kind == 'linking':
        return _linking_from(data)
    if kind == 'multicopy':
        return _multicopy_from(data)
    if kind == 'operator':
        return _operator_from(data)
    if kind == 'sequence':
        return _sequence_from(data)
    if kind == 'report':
        return ScenarioReport.from_dict(data)
    raise ParseError(f"未知对象类型: {kind}")


def describe_object(obj: Persistable) -> str:
    """一行摘要，用于日志"""
    if isinstance(obj, FiniteMetricSpace):
        return f"space {obj.name}: {obj.size} 点, 直径 {obj.diameter:g}"
    if isinstance(obj, LinkingMetric):
        return f"linking {obj.kind.value}: {obj.left.size}×{obj.right.size}"
    if isinstance(obj, MultiCopySpace):
        return f"multicopy {obj.rule.value}: {obj.copies} 副本 × {obj.size} 点"
    if isinstance(obj, SparseOperator):
        return f"operator {obj.domain.name} → {obj.codomain.name}: {obj.nnz} 个非零元"
    if isinstance(obj, OperatorSequence):
        return f"sequence on {obj.domain.name}: {len(obj)} 项"
    if isinstance(obj, PairList):
        return f"pairs: {len(obj)} 对"
    if isinstance(obj, PhiMap):
        return f"phi {obj.name}: horizon {obj.horizon}"
    if isinstance(obj, ScenarioReport):
        return f"report {obj.scenario}: {obj.status}, {len(obj.checks)} 项检查"
    raise PreconditionError(f"不支持的对象类型: {type(obj).__name__}")


def dumps(obj: Persistable) -> str:
    return json.dumps(to_payload(obj), indent=2, ensure_ascii=False)


def loads(text: str) -> Persistable:
    """
    解析 JSON 文本

    Raises:
        ParseError: JSON 语法错误（带行列位置）或结构错误
        MetricViolationError: 度量不满足公理
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON 解析失败: {e.msg}", location=(e.lineno, e.colno)) from e
    try:
        return from_payload(data)
    except RoeLabError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"文件结构无效: {e}") from e


def export_object(obj: Persistable, path: Union[str, Path]) -> Path:
    """把对象写成 JSON 文件，返回写入路径"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps(obj))
        f.write('\n')
    logger.debug(f"已导出 {type(obj).__name__} → {path}")
    return path


def import_object(path: Union[str, Path]) -> Persistable:
    """读取 JSON 文件并重建对象"""
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    obj = loads(text)
    logger.debug(f"已导入 {type(obj).__name__} ← {path}")
    return obj
