"""
Logging configuration and utilities
"""
import functools
import logging
import sys
from logging.handlers import RotatingFileHandler
from config import LOG_FILE, LOG_LEVEL, LOG_FORMAT, LOG_MAX_BYTES, LOG_BACKUP_COUNT

# Ensure logs directory exists
LOG_FILE.parent.mkdir(exist_ok=True)

# Configure root logger
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.WARNING),
    format=LOG_FORMAT,
    handlers=[
        # Console handler (stdout is reserved for reports)
        logging.StreamHandler(sys.stderr),
        # File handler with rotation
        RotatingFileHandler(
            LOG_FILE,
            maxBytes=LOG_MAX_BYTES,
            backupCount=LOG_BACKUP_COUNT,
            encoding='utf-8'
        )
    ]
)


def get_logger(name: str) -> logging.Logger:
    """
    Get a configured logger instance

    Args:
        name: Logger name (usually __name__)

    Returns:
        Configured logger instance
    """
    return logging.getLogger(name)


def set_level(level: str) -> None:
    """Override the root log level for the current process"""
    logging.getLogger().setLevel(getattr(logging, level.upper(), logging.WARNING))


class ReportLogHandler(logging.Handler):
    """Keeps recent warnings so the CLI can attach them to its reports"""

    def __init__(self, max_records: int = 100):
        super().__init__(level=logging.WARNING)
        self.records = []
        self.max_records = max_records

    def emit(self, record):
        self.records.append({
            'level': record.levelname,
            'name': record.name,
            'message': record.getMessage(),
        })

        # Keep only recent records
        if len(self.records) > self.max_records:
            self.records.pop(0)

    def get_records(self, level=None):
        """Get stored records, optionally filtered by level"""
        if level:
            return [rec for rec in self.records if rec['level'] == level]
        return list(self.records)

    def clear(self):
        """Clear stored records"""
        self.records.clear()


# Global report handler
report_handler = ReportLogHandler()
report_handler.setFormatter(logging.Formatter(LOG_FORMAT))
logging.getLogger().addHandler(report_handler)


def log_function_call(func):
    """Decorator to log function calls"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_logger(func.__module__)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(f"Calling {func.__name__} with args={args}, kwargs={kwargs}")
        try:
            result = func(*args, **kwargs)
            logger.debug("%s completed successfully", func.__name__)
            return result
        except Exception as e:
            logger.error(f"{func.__name__} failed with error: {e}", exc_info=True)
            raise

    return wrapper


def get_recent_warnings(count: int = 50):
    """Get recent warning entries"""
    return report_handler.get_records()[-count:]
