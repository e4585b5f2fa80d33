import pytest
from scipy import constants

from relkin.config import DEFAULT_SEED, DEFAULT_TOLERANCES, RunConfig, Units
from relkin.errors import DomainError


def test_defaults(monkeypatch):
    monkeypatch.delenv('RELKIN_SEED', raising=False)
    config = RunConfig()
    assert config.seed == DEFAULT_SEED
    assert config.tolerances == DEFAULT_TOLERANCES
    assert config.tolerances is not DEFAULT_TOLERANCES
    assert config.units == Units.natural()


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv('RELKIN_SEED', '2024')
    assert RunConfig().seed == 2024
    assert RunConfig(seed=5).seed == 5

    monkeypatch.setenv('RELKIN_SEED', 'abc')
    with pytest.raises(DomainError):
        RunConfig()


def test_seed_words():
    assert RunConfig(seed=2 ** 40 + 3).seed_words() == [3, 2 ** 8]
    with pytest.raises(DomainError):
        RunConfig(seed=-1)
    with pytest.raises(DomainError):
        RunConfig(seed=2 ** 64)


def test_override_tolerance():
    config = RunConfig(seed=1)
    config.override_tolerance('riccati = 1e-6')
    assert config.tolerance('riccati') == 1e-6
    assert DEFAULT_TOLERANCES['riccati'] == 1e-8


@pytest.mark.parametrize('assignment', ['riccati', 'nothing=1', 'riccati=x', 'riccati=0', 'riccati=-1e-3'])
def test_override_tolerance_rejects(assignment):
    with pytest.raises(DomainError):
        RunConfig(seed=1).override_tolerance(assignment)


def test_output_format():
    with pytest.raises(DomainError):
        RunConfig(seed=1, output_format='xml')


def test_units():
    si = Units.from_name('si')
    assert si.c == constants.c
    assert si.mass_from_internal(si.mass_to_internal(2.0)) == pytest.approx(2.0, rel=1e-15)
    assert si.velocity_to_internal(constants.c / 2) == pytest.approx(0.5, rel=1e-15)
    assert Units.from_name('natural').velocity_from_internal(0.3) == 0.3
    with pytest.raises(DomainError):
        Units.from_name('cgs')
