"""
Tests for the logging configuration.
"""

import pytest
from loguru import logger

from src.cli.utils.logging_decorator import log_command_call
from src.config.logging_conf import RUN_LOG_NAME, command_context, get_logger


@pytest.fixture
def records():
    captured: list[dict] = []
    sink_id = logger.add(lambda message: captured.append(message.record), level="DEBUG")
    yield captured
    logger.remove(sink_id)


def test_logging_levels(records):
    log = get_logger("test_logging")

    log.debug("This is a debug message")
    log.info("This is an info message")
    log.warning("This is a warning message")
    log.error("This is an error message")

    assert [r["level"].name for r in records] == ["DEBUG", "INFO", "WARNING", "ERROR"]
    assert all(r["extra"]["name"] == "test_logging" for r in records)


def test_default_name_is_calling_module(records):
    get_logger().info("bound to caller")
    assert records[0]["extra"]["name"] == __name__


def test_command_decorator_logs_start_and_exit_code(records, tmp_path):
    @log_command_call
    def run_sample(cfg, out_dir):
        return 1

    assert run_sample(None, tmp_path) == 1
    messages = [r["message"] for r in records]
    assert f"[Command] 'sample' started, output in {tmp_path}" in messages
    assert "[Command] 'sample' finished with exit code 1" in messages


def test_command_decorator_logs_and_reraises(records, tmp_path):
    @log_command_call
    def run_broken(cfg, out_dir):
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        run_broken(None, out_dir=tmp_path)
    assert records[-1]["level"].name == "ERROR"
    assert "boom" in records[-1]["message"]


def test_records_carry_command_name(records, tmp_path):
    log = get_logger("test_logging")

    @log_command_call
    def run_sample(cfg, out_dir):
        log.info("inside")
        return 0

    log.info("outside")
    run_sample(None, tmp_path)

    by_message = {r["message"]: r["extra"]["command"] for r in records}
    assert by_message["outside"] == "-"
    assert by_message["inside"] == "sample"


def test_command_run_log_is_written_to_output_dir(tmp_path):
    @log_command_call
    def run_sample(cfg, out_dir):
        get_logger("test_logging").info("written to run log")
        return 0

    run_sample(None, tmp_path)
    text = (tmp_path / RUN_LOG_NAME).read_text(encoding="utf-8")

    assert "written to run log" in text
    assert "| sample |" in text


def test_command_context_without_output_dir(records):
    with command_context("scan"):
        get_logger("test_logging").info("tagged")
    assert records[-1]["extra"]["command"] == "scan"
