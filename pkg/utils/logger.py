"""
Logging configuration using Loguru
"""
import sys
from pathlib import Path
from typing import Optional

from loguru import logger

from utils.config import settings

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"


def setup_logger(level: Optional[str] = None, log_file: Optional[str] = None):
    """Setup logger with console and optional file handlers"""

    # Remove default handler
    logger.remove()

    # Console handler on stderr; stdout carries reports
    logger.add(
        sys.stderr,
        colorize=True,
        format=CONSOLE_FORMAT,
        level=level or settings.log_level,
    )

    log_file = log_file if log_file is not None else settings.log_file
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            rotation="50 MB",
            retention="30 days",
            format=FILE_FORMAT,
            level=level or settings.log_level,
            serialize=settings.log_format_json,
        )

    # Audit trail of check verdicts
    if settings.audit_log_file:
        Path(settings.audit_log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            settings.audit_log_file,
            rotation="1 day",
            retention="365 days",
            format="{time:YYYY-MM-DD HH:mm:ss} | {message}",
            level="INFO",
            filter=lambda record: "CHECK" in record["extra"],
            serialize=settings.log_format_json,
        )

    return logger
