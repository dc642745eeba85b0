from __future__ import annotations
import logging
import sys
from typing import Optional, Sequence

from qubath.cli.commands import run
from qubath.cli.config import OutputFormat, parse_and_validate
from qubath.cli.envelope import ResultEnvelope, write
from qubath.cli.plotting import emit_plot
from qubath.exceptions import ConfigError, QubathError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MODULE_ERROR = 1
EXIT_CONFIG_ERROR = 2


def _emit(envelope: ResultEnvelope, config) -> None:
    output = config.output
    if output.format == OutputFormat.SVG:
        emit_plot(envelope, output.path)
    elif output.path is not None:
        write(envelope, output.path, output.format.value)
        logger.info("%s written to %s", output.format.value, output.path)
    else:
        text = envelope.to_json() if output.format == OutputFormat.JSON else envelope.to_csv()
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_and_validate(argv)
    except ConfigError as error:
        sys.stderr.write(f"qubath: configuration error: {error}\n")
        return EXIT_CONFIG_ERROR

    logging.basicConfig(level=logging.INFO if config.verbose else logging.WARNING, format='%(message)s')
    try:
        envelope = run(config)
        _emit(envelope, config)
    except QubathError as error:
        failure = ResultEnvelope.failure(config.echo(), error)
        sys.stderr.write(failure.to_json())
        return EXIT_MODULE_ERROR
    return EXIT_OK
