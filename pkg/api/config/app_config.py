"""
Application Configuration
Central defaults for the Hartree-Fock model, both solver routes, the quantum
emulation and output formatting, plus the key=value file loader
"""

import copy
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..errors import ConfigError

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).parent
DEFAULT_BASIS_FILE = CONFIG_DIR / 'basis.cfg'
SYSTEMS_DIR = CONFIG_DIR / 'systems'

# STO-3G hydrogen basis and the expansion of the objective
HF_CONFIG = {
    'c': (0.444635, 0.535328, 0.154329),
    'a': (0.109818, 0.405771, 2.22766),
    'zeta': 1.24,
    'rc': 1.8,
    'order': 3,
    'scale_exp': 8,
    'rounding': 'half_away',   # half_away | floor
}

GROEBNER_CONFIG = {
    'order': 'degrevlex',
    'precedence': ('x', 'e', 'R'),
    'pivot': 'x',
    'real_tol': 1e-6,          # |Im| relative to the largest component
    'validity_window': 1.2,    # |R - R_c|
    'residual_tol': 1e-4,      # relative to the coefficient scale of each generator
}

MACAULAY_CONFIG = {
    'degree': 30,
    'null_threshold': 1e-4,
    'pinv_rtol': 1e-10,
    'rank_rtol': 1e-9,
    'infinity_tol': 1e-6,
    'eigen_residual_tol': 1e-6,
    'residual_tol': 1e-4,      # generator residual relative to the coefficient scale
    'shift_degree': 0,         # 0 = scan for the base degree
    'sweep_degrees': (6, 8, 10, 12, 16, 20, 30),
}

QPE_CONFIG = {
    'route': 'groebner',       # groebner | macaulay
    'bits': 12,
    'repetitions': 50,
    'projector': 'pinv',       # pinv | adjoint
    'scale_policy': 'inf_norm',  # inf_norm | max_entry
    'sampling': False,
    'shots': 1024,
    'seed': 7,
    'branch_floor': 1e-8,
    'max_full_qubits': 11,
    'max_system_qubits': 9,
    'noise_floor': 1e-12,
}

OUTPUT_CONFIG = {
    'out_dir': 'out',
    'format': 'table',         # json | csv | table
    'curve_r_min': 1.5,
    'curve_r_max': 3.0,
    'curve_points': 61,
}

SECTIONS = {
    'hf': HF_CONFIG,
    'groebner': GROEBNER_CONFIG,
    'macaulay': MACAULAY_CONFIG,
    'qpe': QPE_CONFIG,
    'output': OUTPUT_CONFIG,
}


def get_hf_config() -> Dict[str, Any]:
    """Get Hartree-Fock model configuration"""
    return copy.deepcopy(HF_CONFIG)


def get_groebner_config() -> Dict[str, Any]:
    """Get Groebner route configuration"""
    return copy.deepcopy(GROEBNER_CONFIG)


def get_macaulay_config() -> Dict[str, Any]:
    """Get Macaulay route configuration"""
    return copy.deepcopy(MACAULAY_CONFIG)


def get_qpe_config() -> Dict[str, Any]:
    """Get quantum emulation configuration"""
    return copy.deepcopy(QPE_CONFIG)


def get_output_config() -> Dict[str, Any]:
    """Get output configuration"""
    return copy.deepcopy(OUTPUT_CONFIG)


@dataclass
class RunConfig:
    """Merged configuration snapshot for one run"""
    hf: Dict[str, Any] = field(default_factory=get_hf_config)
    groebner: Dict[str, Any] = field(default_factory=get_groebner_config)
    macaulay: Dict[str, Any] = field(default_factory=get_macaulay_config)
    qpe: Dict[str, Any] = field(default_factory=get_qpe_config)
    output: Dict[str, Any] = field(default_factory=get_output_config)
    source: Optional[str] = None

    def section(self, name: str) -> Dict[str, Any]:
        return getattr(self, name)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _coerce(key: str, raw: str, default: Any) -> Any:
    raw = raw.strip()
    try:
        if isinstance(default, bool):
            lowered = raw.lower()
            if lowered in ('1', 'true', 'yes', 'on'):
                return True
            if lowered in ('0', 'false', 'no', 'off'):
                return False
            raise ValueError(raw)
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, tuple):
            parts = [p.strip() for p in raw.replace(';', ',').split(',') if p.strip()]
            if default and isinstance(default[0], str):
                return tuple(parts)
            if default and isinstance(default[0], int) and not isinstance(default[0], bool):
                return tuple(int(p) for p in parts)
            return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"Invalid value for {key}: {raw!r}") from None
    return raw


def _locate(key: str) -> tuple:
    """Resolve `section.key` or a bare key that exists in exactly one section"""
    if '.' in key:
        section, name = key.split('.', 1)
        if section in SECTIONS and name in SECTIONS[section]:
            return section, name
        raise ConfigError(f"Unknown configuration key: {key}")
    owners = [s for s, values in SECTIONS.items() if key in values]
    if len(owners) == 1:
        return owners[0], key
    if not owners:
        raise ConfigError(f"Unknown configuration key: {key}")
    # 'order' lives in hf (Taylor order) and groebner (monomial order)
    raise ConfigError(f"Ambiguous key {key!r}; use one of {[f'{s}.{key}' for s in owners]}")


def load_key_value_config(path: Union[str, Path]) -> Dict[str, Dict[str, Any]]:
    """
    Read a key=value configuration file

    Args:
        path: file with `key = value` lines; `#` comments and `[section]` headers allowed

    Returns:
        Overrides grouped by section, values coerced to the default's type
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"Configuration file not readable: {path} ({e})") from None

    overrides: Dict[str, Dict[str, Any]] = {}
    current_section = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if line.startswith('[') and line.endswith(']'):
            current_section = line[1:-1].strip() or None
            if current_section not in SECTIONS:
                current_section = None
            continue
        if '=' not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split('=', 1))
        if current_section and '.' not in key and key in SECTIONS[current_section]:
            section, name = current_section, key
        else:
            section, name = _locate(key)
        overrides.setdefault(section, {})[name] = _coerce(key, raw, SECTIONS[section][name])
    logger.debug(f"🔍 Loaded {sum(len(v) for v in overrides.values())} overrides from {path}")
    return overrides


def build_config(path: Optional[Union[str, Path]] = None,
                 overrides: Optional[Dict[str, Dict[str, Any]]] = None) -> RunConfig:
    """
    Merge defaults, a key=value file and explicit overrides (CLI flags, JSON bodies)

    Args:
        path: optional key=value file
        overrides: {section: {key: value}}; None values are ignored

    Returns:
        RunConfig snapshot
    """
    config = RunConfig(source=str(path) if path else None)
    layers = []
    if path:
        layers.append(load_key_value_config(path))
    if overrides:
        layers.append(overrides)
    for layer in layers:
        for section, values in layer.items():
            if section not in SECTIONS:
                raise ConfigError(f"Unknown configuration section: {section}")
            target = config.section(section)
            for key, value in values.items():
                if value is None:
                    continue
                if key not in target:
                    raise ConfigError(f"Unknown configuration key: {section}.{key}")
                default = SECTIONS[section][key]
                if isinstance(value, str) and not isinstance(default, str):
                    value = _coerce(f"{section}.{key}", value, default)
                elif isinstance(default, tuple) and isinstance(value, list):
                    value = tuple(value)
                target[key] = value
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    hf = config.hf
    if len(hf['c']) != 3 or len(hf['a']) != 3:
        raise ConfigError("STO-3G needs three contraction coefficients and three exponents")
    if any(a <= 0 for a in hf['a']) or hf['zeta'] <= 0:
        raise ConfigError("Gaussian exponents and zeta must be positive")
    if hf['rc'] <= 0 or hf['order'] < 0 or hf['scale_exp'] < 0:
        raise ConfigError("rc must be positive; order and scale_exp non-negative")
    if hf['rounding'] not in ('half_away', 'floor'):
        raise ConfigError(f"Unknown rounding mode: {hf['rounding']}")
    if config.qpe['route'] not in ('groebner', 'macaulay'):
        raise ConfigError(f"Unknown route: {config.qpe['route']}")
    if config.qpe['bits'] < 1:
        raise ConfigError("bits must be at least 1")
    if config.qpe['projector'] not in ('adjoint', 'pinv'):
        raise ConfigError(f"Unknown projector: {config.qpe['projector']}")
    if config.qpe['scale_policy'] not in ('inf_norm', 'max_entry'):
        raise ConfigError(f"Unknown scale policy: {config.qpe['scale_policy']}")
    if config.output['format'] not in ('json', 'csv', 'table'):
        raise ConfigError(f"Unknown output format: {config.output['format']}")


def bundled_system_path(name: str) -> Path:
    """Path of a bundled polynomial system file (`two-level` -> systems/two_level.txt)"""
    return SYSTEMS_DIR / f"{name.replace('-', '_')}.txt"
