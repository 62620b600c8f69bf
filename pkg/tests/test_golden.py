"""Reports for the shipped fixtures must reproduce the frozen golden files byte for byte."""

import pytest

from reltilt import cli
from reltilt.bqa import FIXTURE_DIR

GOLDEN = sorted(FIXTURE_DIR.glob("*.golden.json"))


def test_goldens_present():
    assert len(GOLDEN) >= 4


@pytest.mark.parametrize("path", GOLDEN, ids=lambda p: p.name)
def test_golden(path, tmp_path):
    fixture, command = path.name.split(".")[:2]
    out = tmp_path / "report.json"
    cli.run([command, "@" + fixture, "--json", str(out)])
    assert out.read_bytes() == path.read_bytes()
