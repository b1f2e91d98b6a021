import io
import json
from pathlib import Path

import pytest

from apolarity.cli import run

GOLDEN = sorted((Path(__file__).parent / "golden").glob("*.json"))


@pytest.mark.parametrize("path", GOLDEN, ids=[p.stem for p in GOLDEN])
def test_golden_report(path):
    case = json.loads(path.read_text())
    out = io.StringIO()
    assert run(case["argv"], stdout=out) == 0
    rep = json.loads(out.getvalue())
    for key, value in case["expected"].items():
        assert rep[key] == value
    assert rep == case["report"]


def test_reports_match_schema():
    jsonschema = pytest.importorskip("jsonschema")
    from importlib.resources import files

    schema = json.loads(files("apolarity").joinpath("report.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    for path in GOLDEN:
        jsonschema.validate(json.loads(path.read_text())["report"], schema)
