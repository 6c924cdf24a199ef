import io
import logging

import pytest

from mooreca import debugprint


@pytest.fixture
def restore_logger(monkeypatch):
    handlers = list(debugprint.logger.handlers)
    level = debugprint.logger.level
    monkeypatch.setattr(debugprint, "DISABLED", True)
    yield
    debugprint.logger.handlers[:] = handlers
    debugprint.logger.setLevel(level)


def test_silent_by_default(restore_logger, caplog):
    with caplog.at_level(logging.DEBUG, logger="mooreca"):
        debugprint.debug("hidden")
    assert "hidden" not in caplog.text


def test_enable_writes_to_stream(restore_logger):
    stream = io.StringIO()
    debugprint.enable(stream)
    debugprint.debug("rank", 12, "via", "block")
    assert stream.getvalue() == "mooreca: rank 12 via block\n"
