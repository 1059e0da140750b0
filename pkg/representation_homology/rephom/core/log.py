import logging

LOGGER_NAME = "rephom"


def get_logger() -> logging.Logger:
    return logging.getLogger(LOGGER_NAME)


def setup_logging(level: int = logging.INFO) -> None:
    logger = get_logger()
    logger.setLevel(level)
    # a single handler on the current stderr
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    log_formatter = logging.Formatter(fmt="{asctime} {levelname:8} {message}", datefmt="%Y-%m-%d %H:%M:%S", style="{")
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(log_formatter)
    logger.addHandler(stream_handler)
    logger.propagate = False
