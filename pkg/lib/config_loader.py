import os
from typing import Any, Dict, Optional, Sequence, Tuple

import yaml
from dotenv import load_dotenv
from pydantic import ValidationError

from lib.errors import ConfigError
from lib.experiments.experiment_config import ExperimentConfig

ENV_FILE = 'hartree_lab.env'
OUTPUT_ROOT_VARIABLE = 'HARTREE_LAB_OUTPUT_ROOT'
DEFAULT_OUTPUT_ROOT = 'output'


def _locate(node: Optional[yaml.Node], path: Sequence[Any]) -> Optional[Tuple[int, int]]:
    """1-based (line, column) of the deepest node on ``path`` present in the YAML tree."""
    mark = None
    for key in path:
        if node is None:
            break
        mark = node.start_mark
        if isinstance(node, yaml.MappingNode):
            match = [(k, v) for k, v in node.value if k.value == str(key)]
            if not match:
                break
            key_node, node = match[0]
            mark = key_node.start_mark
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
            mark = node.start_mark
        else:
            break
    if mark is None:
        return None
    return mark.line + 1, mark.column + 1


class ConfigLoader:
    @staticmethod
    def load_env() -> None:
        load_dotenv(ENV_FILE)

    @staticmethod
    def output_root() -> str:
        return os.environ.get(OUTPUT_ROOT_VARIABLE, DEFAULT_OUTPUT_ROOT)

    @staticmethod
    def load_experiment_yaml(config_path: str) -> Tuple[Dict[str, Any], Optional[yaml.Node]]:
        if not os.path.exists(config_path):
            raise ConfigError(f"Config file not found: {config_path}")

        with open(config_path, 'r', encoding='utf-8') as f:
            text = f.read()
        try:
            data = yaml.safe_load(text)
            tree = yaml.compose(text, Loader=yaml.SafeLoader)
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark or e.context_mark
            raise ConfigError(f"{config_path}: {e.problem or e.context}",
                              line=mark.line + 1 if mark else None,
                              column=mark.column + 1 if mark else None) from e
        except yaml.YAMLError as e:
            raise ConfigError(f"{config_path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{config_path}: top level must be a mapping, got {type(data).__name__}",
                              line=1, column=1)
        return data, tree

    @staticmethod
    def create_experiment_config(config_dict: Dict[str, Any], tree: Optional[yaml.Node] = None,
                                 source: str = '<config>') -> ExperimentConfig:
        try:
            return ExperimentConfig.model_validate(config_dict)
        except ValidationError as e:
            first = e.errors()[0]
            location = [part for part in first['loc'] if not str(part).startswith('function-')]
            dotted = '.'.join(str(part) for part in location) or '<root>'
            position = _locate(tree, location)
            message = f"{source}: {dotted}: {first['msg']}"
            if len(e.errors()) > 1:
                message += f" (and {len(e.errors()) - 1} more error(s))"
            if position is None:
                raise ConfigError(message, field=dotted) from e
            raise ConfigError(message, field=dotted, line=position[0], column=position[1]) from e

    @staticmethod
    def load_experiment_config(config_path: str) -> ExperimentConfig:
        data, tree = ConfigLoader.load_experiment_yaml(config_path)
        return ConfigLoader.create_experiment_config(data, tree, config_path)
