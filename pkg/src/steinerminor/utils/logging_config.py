# src/steinerminor/utils/logging_config.py


import logging

from steinerminor.config.settings import DEFAULT_LOG_FILE, DEFAULT_LOG_LEVEL

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def set_log_level(level: str) -> None:
    # Applies to every logger already handed out under the package namespace
    for name, logger in logging.Logger.manager.loggerDict.items():
        if name.startswith("steinerminor") and isinstance(logger, logging.Logger):
            logger.setLevel(level.upper())


def get_logger(name):
    logger = logging.getLogger(name)

    if not logger.handlers:
        logger.setLevel(DEFAULT_LOG_LEVEL.upper())
        formatter = logging.Formatter(LOG_FORMAT)
        handler = logging.StreamHandler()
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        if DEFAULT_LOG_FILE:
            file_handler = logging.FileHandler(DEFAULT_LOG_FILE)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        logger.propagate = False  # Prevent propagation to ancestor loggers

    return logger
