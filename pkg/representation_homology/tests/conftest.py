import json

import pytest

from rephom.core.exact import Field
from rephom.core.liegroups import AlgGroup, element
from rephom.core.log import get_logger


@pytest.fixture(autouse=True)
def _detach_log_handlers():
    # CLI runs attach a handler to a stream that is closed once the run ends
    yield
    logger = get_logger()
    for handler in list(logger.handlers):
        logger.removeHandler(handler)


@pytest.fixture
def rationals() -> Field:
    return Field.rational()


@pytest.fixture
def gl2() -> AlgGroup:
    return AlgGroup.gl(2)


@pytest.fixture
def sl2() -> AlgGroup:
    return AlgGroup.sl(2)


def make_element(group: AlgGroup, rows, field: Field):
    """Group element from rows of literals such as 1, "1/2" or "z"."""
    return element(group, [[field.parse_scalar(str(v)) for v in row] for row in rows], field)


def parse_json(output: str) -> dict:
    """The first JSON object in ``output``, ignoring anything logged after it."""
    start = output.index("{")
    document, _ = json.JSONDecoder().raw_decode(output[start:])
    return document
