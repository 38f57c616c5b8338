"""Tests for rate/range parsing, environment settings and errors."""

import logging

import pytest

from src.utils import (
    DegenerateRegimeError, DomainError, LendingModelError, NumericalError,
    ensure_dirs, env_setting, parse_range, parse_rate, set_log_level, setup_logging,
)


class TestParseRate:
    def test_fraction(self):
        assert parse_rate("0.2") == pytest.approx(0.2)

    def test_percent(self):
        assert parse_rate("20%") == pytest.approx(0.2)
        assert parse_rate("160%") == pytest.approx(1.6)

    def test_negative(self):
        assert parse_rate("-5%") == pytest.approx(-0.05)

    def test_number_passthrough(self):
        assert parse_rate(0.15) == 0.15

    def test_garbage_is_domain_error(self):
        with pytest.raises(DomainError):
            parse_rate("twenty")
        with pytest.raises(ValueError):
            parse_rate("%")


class TestParseRange:
    def test_mu_grid_is_exact(self):
        values = parse_range("0:0.10:0.01")
        assert len(values) == 11
        assert values[0] == 0.0
        assert values[1] == 0.01
        assert values[5] == 0.05
        assert values[-1] == 0.1

    def test_interest_grid_in_percent(self):
        values = parse_range("1%:160%:1%")
        assert len(values) == 160
        assert values[0] == 0.01
        assert values[99] == 1.0
        assert values[-1] == 1.6

    def test_single_point(self):
        assert parse_range("0:0:1") == [0.0]
        assert parse_range("0.2") == [0.2]

    def test_empty_range_rejected(self):
        with pytest.raises(DomainError):
            parse_range("0.1:0:0.01")

    def test_bad_step_rejected(self):
        with pytest.raises(DomainError):
            parse_range("0:1:0")
        with pytest.raises(DomainError):
            parse_range("0:1")


class TestEnvSetting:
    def test_default_when_unset(self, monkeypatch):
        monkeypatch.delenv("ZSL_SEED", raising=False)
        assert env_setting("seed", 17, int) == 17

    def test_env_overrides_default(self, monkeypatch):
        monkeypatch.setenv("ZSL_WORKERS", "4")
        assert env_setting("workers", 1, int) == 4

    def test_blank_is_unset(self, monkeypatch):
        monkeypatch.setenv("ZSL_SIGMA", "  ")
        assert env_setting("sigma", 0.25, parse_rate) == 0.25

    def test_bad_value(self, monkeypatch):
        monkeypatch.setenv("ZSL_SEED", "abc")
        with pytest.raises(DomainError):
            env_setting("seed", 1, int)


class TestErrors:
    def test_hierarchy(self):
        assert issubclass(DomainError, LendingModelError)
        assert issubclass(DomainError, ValueError)
        assert issubclass(DegenerateRegimeError, NumericalError)

    def test_numerical_error_carries_estimate(self):
        e = NumericalError("boom", estimate=0.5, error_bound=1e-3, cell=(1, 2))
        assert e.estimate == 0.5
        assert e.error_bound == 1e-3
        assert e.cell == (1, 2)


class TestLogging:
    def test_handler_added_once(self):
        logger = setup_logging("src.test_handler_once")
        setup_logging("src.test_handler_once")
        assert len(logger.handlers) == 1

    def test_set_log_level(self):
        logger = setup_logging("src.test_level")
        set_log_level("ERROR")
        assert logger.level == logging.ERROR
        set_log_level(logging.INFO)
        assert logger.level == logging.INFO


class TestEnsureDirs:
    def test_creates_extra(self, tmp_path):
        target = tmp_path / "a" / "b"
        ensure_dirs(target)
        assert target.is_dir()
