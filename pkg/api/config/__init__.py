"""
Configuration Module
Handles run defaults, key=value configuration files and embedded reference data
"""

from .app_config import (
    GROEBNER_CONFIG,
    HF_CONFIG,
    MACAULAY_CONFIG,
    OUTPUT_CONFIG,
    QPE_CONFIG,
    RunConfig,
    build_config,
    bundled_system_path,
    get_groebner_config,
    get_hf_config,
    get_macaulay_config,
    get_output_config,
    get_qpe_config,
    load_key_value_config,
)
from .config_loader import (
    ConfigLoader,
    TABLE_IDS,
    config_loader,
    get_reference_objective,
    get_reference_table,
)

__all__ = [
    'GROEBNER_CONFIG',
    'HF_CONFIG',
    'MACAULAY_CONFIG',
    'OUTPUT_CONFIG',
    'QPE_CONFIG',
    'RunConfig',
    'build_config',
    'bundled_system_path',
    'get_groebner_config',
    'get_hf_config',
    'get_macaulay_config',
    'get_output_config',
    'get_qpe_config',
    'load_key_value_config',
    'ConfigLoader',
    'TABLE_IDS',
    'config_loader',
    'get_reference_objective',
    'get_reference_table',
]
