from dataclasses import replace

import pytest

from uavbs.config import preset


def tiny_config(epochs=6, method="proposed", **train):
    """Desk world with a tiny network and buffer so runs take seconds."""
    cfg = preset("desk")
    t = dict(epochs=epochs, hidden=8, depth=3, comm_layers=1, warmup=64, batch_size=16,
             buffer_capacity=2000, eval_episodes=2)
    t.update(train)
    return replace(cfg.with_method(method), train=replace(cfg.train, **t))


@pytest.fixture
def tiny():
    return tiny_config


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion, then assert it."""

    def record(cid, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {cid} {title}" + (f" :: {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
