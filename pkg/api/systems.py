"""
Polynomial system sources
Resolves a system argument (bundled name, file path or inline text) into a
PolySystem, together with the objective that produced it when there is one
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .config import RunConfig, bundled_system_path
from .errors import ConfigError
from .groebner import PolySystem, stationarity_system
from .hf import EnergyPolynomial, generate_objective, reference_objective

logger = logging.getLogger(__name__)

OBJECTIVE_SYSTEMS = ('h3plus', 'h3plus-reference')
BUNDLED_SYSTEMS = ('two-level', 'unit-root', 'sqrt-two')

_RING_DIRECTIVE = re.compile(r"^\s*#\s*ring\s*:\s*(.+)$", re.IGNORECASE | re.MULTILINE)


@dataclass
class LoadedSystem:
    """A system ready to solve, with its objective (energy column) and expansion center"""
    name: str
    system: PolySystem
    objective: Optional[EnergyPolynomial] = None
    rc: Optional[float] = None

    @property
    def ring(self):
        return self.system.ring

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'ring': list(self.ring),
            'generators': [str(f) for f in self.system.generators],
            'degrees': self.system.degrees(),
            'order': self.system.order.describe(self.ring),
            'objective': self.objective.to_dict() if self.objective else None,
            'rc': self.rc,
        }


def ring_directive(text: str) -> Optional[List[str]]:
    """Variables named by a `# ring: x, y, e` line, or None"""
    match = _RING_DIRECTIVE.search(text)
    if not match:
        return None
    names = [v.strip() for v in re.split(r"[,\s]+", match.group(1)) if v.strip()]
    return names or None


def system_from_text(text: str, config: RunConfig, name: str = 'inline') -> LoadedSystem:
    g = config.groebner
    system = PolySystem.from_text(text, g['order'], g['precedence'], ring_directive(text))
    return LoadedSystem(name, system)


def load_system(source: Union[str, Path], config: Optional[RunConfig] = None) -> LoadedSystem:
    """
    Resolve a system argument.

    Args:
        source: 'h3plus' (partials of the generated objective), 'h3plus-reference'
            (partials of the embedded printed objective), a bundled file name
            such as 'two-level', or a path to a system file
        config: RunConfig supplying the hf and groebner sections

    Returns:
        LoadedSystem
    """
    config = config or RunConfig()
    g = config.groebner
    name = str(source)
    if name in OBJECTIVE_SYSTEMS:
        objective = generate_objective(config.hf) if name == 'h3plus' else reference_objective()
        system = stationarity_system(objective.polynomial, g['order'], g['precedence'])
        logger.info(f"📊 {name}: {system.describe()}")
        return LoadedSystem(name, system, objective, objective.rc)

    path = bundled_system_path(name) if name in BUNDLED_SYSTEMS else Path(name)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError:
        raise ConfigError(f"System not found: {name} (bundled: "
                          f"{', '.join(OBJECTIVE_SYSTEMS + BUNDLED_SYSTEMS)})") from None
    loaded = system_from_text(text, config, name)
    logger.info(f"📊 {name}: {loaded.system.describe()}")
    return loaded
