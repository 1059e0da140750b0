import json
import typing

import typer

from rephom.core.cotangent import RepPoint, expected_local_dimension, trivial_rep
from rephom.core.errors import ConfigError, MissingGenerator
from rephom.core.exact import Field, parse_field
from rephom.core.liegroups import AlgGroup, diagonal_element, element
from rephom.core.log import get_logger
from rephom.core.spaces import CyclicGroupSpace, LensSpace, SpaceModel, generator_count

logger = get_logger()

CONFIG_META_KEY = "rephom.config"


def setting(ctx: typer.Context, name: str, value: typing.Any, default: typing.Any = None) -> typing.Any:
    """
    Resolves an option: the flag if it was passed, otherwise the value from the
    --config file, otherwise the default.
    """
    if value is not None:
        return value
    return ctx.meta.get(CONFIG_META_KEY, {}).get(name, default)


def required_setting(ctx: typer.Context, name: str, value: typing.Any) -> typing.Any:
    resolved = setting(ctx, name, value)
    if resolved is None:
        raise ConfigError(f'Missing option "--{name.replace("_", "-")}", pass it or set it in the config file')
    return resolved


def field_setting(ctx: typer.Context, field_arg: str | None, space: SpaceModel) -> Field:
    """
    The coefficient field from the flag or the config file. Without either, lens
    spaces and B Z_p use cyclotomic:p, which holds the roots of unity their
    representations need, and other spaces use Q.
    """
    text = setting(ctx, "field", field_arg)
    if text is None:
        text = f"cyclotomic:{space.p}" if isinstance(space, LensSpace | CyclicGroupSpace) else "Q"
        logger.info(f"No field given, using {text}")
    return parse_field(text)


def parse_int(value: typing.Any, name: str, minimum: int | None = None) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError) as error:
        raise ConfigError(f'Option "--{name}" must be an integer, got "{value}"') from error
    if minimum is not None and number < minimum:
        raise ConfigError(f'Option "--{name}" must be at least {minimum}, got {number}')
    return number


def parse_h(h_arg: str) -> dict[int, int]:
    """
    Parses graded dimensions written as ``degree:dim`` pairs separated by
    commas, e.g. ``0:2,2:2``.
    """
    h = {}
    column = 1
    for part in str(h_arg).split(","):
        degree, sep, dim = part.partition(":")
        try:
            if not sep:
                raise ValueError
            h[int(degree)] = h.get(int(degree), 0) + int(dim)
        except ValueError as error:
            raise ConfigError(f'Expected "degree:dim", got "{part.strip()}"', line=1, column=column) from error
        column += len(part) + 1
    if any(degree < 0 or dim < 0 for degree, dim in h.items()):
        raise ConfigError(f'Degrees and dimensions must be non-negative in "{h_arg}"', line=1)
    return h


def parse_exponents(exponents_arg: str) -> tuple[int, ...]:
    """Comma separated exponents, e.g. ``1,2`` for SL3; an empty string is the empty list."""
    if not str(exponents_arg).strip():
        return ()
    try:
        return tuple(int(part) for part in str(exponents_arg).split(","))
    except ValueError as error:
        raise ConfigError(f'Exponents must be comma separated integers, got "{exponents_arg}"', line=1) from error


def parse_local_dim(local_dim_arg: typing.Any, space: SpaceModel, group: AlgGroup) -> int | None:
    """
    ``expected`` uses the known component dimension of the space, an integer is
    taken as declared, nothing means no smoothness claim.
    """
    if local_dim_arg is None:
        return None
    if str(local_dim_arg) == "expected":
        local_dim = expected_local_dimension(space, group)
        if local_dim is None:
            raise ConfigError(f"No expected local dimension is known for {type(space).__name__}, declare it")
        return local_dim
    return parse_int(local_dim_arg, "local-dim", minimum=0)


def _matrix_images(document: typing.Any, group: AlgGroup, field: Field) -> list:
    if not isinstance(document, list):
        raise ConfigError("A representation must be a JSON list with one matrix per generator")
    images = []
    for index, rows in enumerate(document):
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise ConfigError(f"Generator image {index + 1} must be a list of rows")
        images.append(element(group, [[field.parse_scalar(str(v)) for v in row] for row in rows], field))
    return images


def parse_rep(rep_arg: str, space: SpaceModel, group: AlgGroup, field: Field) -> RepPoint:
    """
    Parses a representation: ``trivial``, ``diag:a,b;c,d`` with one diagonal
    per generator, or a JSON list of matrices whose entries are literals such
    as ``"1/2"`` or ``"z"``.

    Raises:
        ConfigError: with the line and column of JSON syntax errors
        MissingGenerator: when the number of images does not match the space
    """
    text = str(rep_arg).strip()
    if text == "trivial":
        return trivial_rep(space, group, field)
    if text.startswith("diag:"):
        images = []
        for chunk in text.removeprefix("diag:").split(";"):
            diagonal = [field.parse_scalar(v) for v in chunk.split(",")]
            if len(diagonal) != group.size:
                raise ConfigError(f"Diagonal of {group} needs {group.size} entries, got {len(diagonal)}")
            images.append(diagonal_element(group, diagonal, field))
    else:
        try:
            document = json.loads(text)
        except json.JSONDecodeError as error:
            raise ConfigError(f"Invalid representation JSON: {error.msg}", line=error.lineno, column=error.colno) from error
        images = _matrix_images(document, group, field)
    expected = generator_count(space)
    if len(images) != expected:
        raise MissingGenerator(f"{type(space).__name__} needs {expected} generator images, got {len(images)}")
    return RepPoint(group, field, tuple(images), label=text if len(text) <= 40 else "inline")
