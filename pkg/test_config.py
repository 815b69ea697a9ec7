"""
Tests for configuration layering, reference data checksums and system loading
"""

import json
import shutil
from pathlib import Path

import pytest

from api.config import (
    TABLE_IDS,
    ConfigLoader,
    RunConfig,
    build_config,
    get_reference_table,
    load_key_value_config,
)
from api.errors import ConfigError, ReferenceDataError
from api.systems import load_system, ring_directive, system_from_text

REFERENCE_DIR = Path(__file__).parent / 'api' / 'config' / 'reference'


def test_defaults():
    config = build_config()
    assert config.hf['rc'] == 1.8
    assert config.hf['scale_exp'] == 8
    assert config.groebner['order'] == 'degrevlex'
    assert config.groebner['precedence'] == ('x', 'e', 'R')
    assert config.macaulay['degree'] == 30
    assert config.qpe['bits'] == 12
    assert config.qpe['projector'] == 'pinv'
    assert config.source is None


def test_sections_are_independent_copies():
    first, second = RunConfig(), RunConfig()
    first.hf['rc'] = 2.0
    assert second.hf['rc'] == 1.8


def test_key_value_file_with_sections(tmp_path):
    path = tmp_path / 'run.cfg'
    path.write_text("# a comment\n"
                    "[hf]\n"
                    "order = 2      # Taylor order\n"
                    "rc = 1.9\n"
                    "[groebner]\n"
                    "order = grlex\n"
                    "bits = 10\n"
                    "macaulay.sweep_degrees = 4, 6\n"
                    "sampling = yes\n")
    overrides = load_key_value_config(path)
    assert overrides['hf'] == {'order': 2, 'rc': 1.9}
    assert overrides['groebner'] == {'order': 'grlex'}
    assert overrides['qpe'] == {'bits': 10, 'sampling': True}
    assert overrides['macaulay'] == {'sweep_degrees': (4, 6)}

    config = build_config(path)
    assert config.source == str(path)
    assert config.hf['order'] == 2
    assert config.groebner['order'] == 'grlex'


def test_bare_ambiguous_key_is_rejected(tmp_path):
    path = tmp_path / 'run.cfg'
    path.write_text("order = 2\n")
    with pytest.raises(ConfigError, match='Ambiguous'):
        load_key_value_config(path)


@pytest.mark.parametrize('text', ["rc\n", "bogus = 1\n", "hf.bogus = 1\n", "bits = twelve\n"])
def test_bad_file_lines(tmp_path, text):
    path = tmp_path / 'run.cfg'
    path.write_text(text)
    with pytest.raises(ConfigError):
        build_config(path)


def test_missing_file():
    with pytest.raises(ConfigError):
        build_config('/nonexistent/run.cfg')


def test_overrides_win_and_none_is_ignored():
    config = build_config(None, {'qpe': {'bits': '9', 'seed': None}, 'macaulay': {'sweep_degrees': [4, 6]}})
    assert config.qpe['bits'] == 9
    assert config.qpe['seed'] == 7
    assert config.macaulay['sweep_degrees'] == (4, 6)


@pytest.mark.parametrize('overrides', [
    {'hf': {'rounding': 'banker'}},
    {'hf': {'a': (0.1, -0.4, 2.2)}},
    {'hf': {'c': (0.4, 0.5)}},
    {'qpe': {'route': 'lanczos'}},
    {'qpe': {'bits': 0}},
    {'qpe': {'projector': 'qr'}},
    {'output': {'format': 'xml'}},
    {'nosuch': {'x': 1}},
    {'hf': {'nosuch': 1}},
])
def test_invalid_overrides(overrides):
    with pytest.raises(ConfigError):
        build_config(None, overrides)


def test_reference_tables_are_intact():
    loader = ConfigLoader()
    assert loader.verify_checksums() == []
    assert set(loader.checksums()) >= set(TABLE_IDS)
    assert len(get_reference_table('T1')['rows']) == 22


def test_tampered_table_is_reported(tmp_path):
    shutil.copytree(REFERENCE_DIR, tmp_path / 'reference')
    target = tmp_path / 'reference' / 'T5.json'
    table = json.loads(target.read_text())
    table['rows'][0]['rank'] += 1
    target.write_text(json.dumps(table))

    loader = ConfigLoader(tmp_path / 'reference')
    problems = loader.verify_checksums()
    assert len(problems) == 1 and 'T5.json' in problems[0]
    with pytest.raises(ReferenceDataError):
        loader.load_table('T5')
    # unverified loads still work
    assert loader.load_table('T5', verify=False)['rows'][0]['rank'] == table['rows'][0]['rank']


def test_unknown_table():
    with pytest.raises(ReferenceDataError):
        ConfigLoader().load_table('T9')


def test_ring_directive():
    assert ring_directive("# ring: x, y, e\nx - y") == ['x', 'y', 'e']
    assert ring_directive("x - y") is None


def test_bundled_and_inline_systems(two_level):
    assert two_level.ring == ('x', 'y', 'e')
    assert two_level.system.degrees() == [2, 2, 2]
    assert two_level.objective is None
    inline = system_from_text("x**2 - 2", RunConfig())
    assert inline.name == 'inline'
    assert inline.ring == ('x',)


def test_system_file_path(tmp_path):
    path = tmp_path / 'cubic.txt'
    path.write_text("# ring: t\nt**3 - t;\n")
    loaded = load_system(str(path))
    assert loaded.ring == ('t',)
    assert loaded.to_dict()['degrees'] == [3]


def test_unknown_system():
    with pytest.raises(ConfigError, match='System not found'):
        load_system('no-such-system')


def test_reference_objective_system(h3plus):
    assert h3plus.ring == ('x', 'e', 'R')
    assert h3plus.rc == 1.8
    assert h3plus.system.degrees() == [6, 5, 6]


def test_shipped_basis_file_reproduces_the_defaults():
    from api.config.app_config import DEFAULT_BASIS_FILE

    assert build_config(DEFAULT_BASIS_FILE).hf == RunConfig().hf
