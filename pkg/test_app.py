"""
Tests for the molroots Flask API
"""

import pytest

from app import app


@pytest.fixture
def client():
    app.config['TESTING'] = True
    with app.test_client() as client:
        yield client


def test_health(client):
    response = client.get('/health')
    assert response.status_code == 200
    data = response.get_json()
    assert data['status'] == 'healthy'
    assert data['service'] == 'molroots-api'
    assert 'numpy' in data['libraries']


def test_solve_two_level(client):
    response = client.post('/api/solve', json={'route': 'groebner', 'system': 'two-level'})
    assert response.status_code == 200
    data = response.get_json()
    assert len(data['records']) == 4
    assert 'outputs' not in data
    # complex values travel as {re, im}
    assert set(data['records'][0]['x']) == {'re', 'im'}


def test_solve_inline_macaulay(client):
    response = client.post('/api/solve', json={'route': 'macaulay', 'text': 'x**2 - 2', 'degree': 4})
    assert response.status_code == 200
    assert response.get_json()['summary']['nullity'] == 2


def test_config_overrides_are_applied(client):
    response = client.post('/api/qpe', json={'system': 'two-level', 'route': 'groebner',
                                             'config': {'qpe': {'bits': 5}}})
    assert response.status_code == 200
    assert response.get_json()['summary']['bits'] == 5


@pytest.mark.parametrize('body', [
    [1, 2],
    {'route': 'homotopy', 'system': 'two-level'},
    {'system': 'two-level', 'sweep': 3},
    {'system': 'no-such-system'},
    {'system': 'two-level', 'config': {'qpe': {'bits': 0}}},
    {'system': 'two-level', 'config': 'fast'},
])
def test_bad_requests(client, body):
    response = client.post('/api/solve', json=body)
    assert response.status_code == 400
    assert response.get_json()['error']


def test_solver_errors_are_reported_with_their_type(client):
    response = client.post('/api/solve', json={'route': 'groebner', 'text': 'x**2'})
    assert response.status_code == 400
    assert response.get_json()['type'] == 'DefectivePivotError'


def test_energy_curve(client):
    response = client.post('/api/energy-curve', json={'r_min': 1.7, 'r_max': 1.9, 'points': 3})
    assert response.status_code == 200
    assert len(response.get_json()['rows']) == 3


def test_verify_subset(client):
    response = client.get('/api/verify?only=T5,checksums&skip_slow=1')
    assert response.status_code == 200
    data = response.get_json()
    assert data['passed']
    assert set(data['tables']) == {'T5', 'CHECKSUMS'}
    assert 'report' not in data


def test_unknown_endpoint_and_method(client):
    assert client.get('/api/nothing').status_code == 404
    assert client.get('/api/solve').status_code == 405
