"""
Emoji-tagged logging with rotating run and numerics logs.
"""
import logging
import logging.handlers
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional


class EmojiLogger:
    """Class-level logger: readable console lines plus a numerics audit stream."""

    EMOJIS = {
        # Run flow
        'startup': '🚀',
        'shutdown': '🔌',
        'success': '✅',
        'error': '❌',
        'info': 'ℹ️',

        # Numerics
        'shooting': '🎯',
        'caustic': '💥',
        'fallback': '↩️',
        'airy': '〰️',
        'transform': '🔁',

        # Sweeps and output
        'sweep': '📈',
        'save': '💾',
        'validation': '✔️',
    }

    # categories mirrored to the numerics log together with their extra data
    NUMERICS_CATEGORIES = ('caustic', 'fallback', 'shooting', 'airy', 'transform', 'validation')

    LOG_DIR = 'logs'
    APP_LOG_FILE = 'bargmann.log'
    NUMERICS_LOG_FILE = 'numerics.log'

    @classmethod
    def setup_logging(cls, config: Optional[Dict[str, Any]] = None) -> None:
        """
        Configure the run log, the numerics log and the console handler.

        Args:
            config: Optional settings: log_dir, console_level
        """
        if config is None:
            config = {}

        log_dir = Path(config.get('log_dir') or os.getenv('BARGMANN_LOG_DIR') or cls.LOG_DIR)
        log_dir.mkdir(parents=True, exist_ok=True)

        app_logger = logging.getLogger('bargmann.run')
        app_logger.setLevel(logging.DEBUG)
        numerics_logger = logging.getLogger('bargmann.numerics')
        numerics_logger.setLevel(logging.INFO)

        for logger in (app_logger, numerics_logger):
            for handler in logger.handlers[:]:
                logger.removeHandler(handler)
            logger.propagate = False

        app_handler = logging.handlers.RotatingFileHandler(
            log_dir / cls.APP_LOG_FILE,
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        app_handler.setLevel(logging.DEBUG)
        app_handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
        app_logger.addHandler(app_handler)

        numerics_handler = logging.handlers.RotatingFileHandler(
            log_dir / cls.NUMERICS_LOG_FILE,
            maxBytes=10*1024*1024,
            backupCount=5,
            encoding='utf-8'
        )
        numerics_handler.setLevel(logging.INFO)
        numerics_handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(levelname)s - %(message)s - [%(extra_data)s]',
            defaults={'extra_data': ''}
        ))
        numerics_logger.addHandler(numerics_handler)

        console_handler = logging.StreamHandler()
        console_handler.setLevel(config.get('console_level', logging.INFO))
        console_handler.setFormatter(logging.Formatter('%(message)s'))
        app_logger.addHandler(console_handler)

        cls._logging_setup_done = True

    @classmethod
    def log(cls, category: str, message: str, level: str = 'info', extra: Optional[Dict[str, Any]] = None) -> None:
        """
        Log a message tagged with the category's emoji.

        Args:
            category: Key of EMOJIS
            message: The message to log
            level: debug, info, warning, error or critical
            extra: Data attached to the numerics log entry
        """
        if not getattr(cls, '_logging_setup_done', False):
            cls.setup_logging()

        emoji = cls.EMOJIS.get(category, '📝')
        timestamp = datetime.now().strftime('%H:%M:%S.%f')[:-3]
        formatted_message = f"[{timestamp}] {emoji} {message}"

        logger = logging.getLogger('bargmann.run')
        log_func = getattr(logger, level.lower(), logger.info)
        log_func(formatted_message)

        if category in cls.NUMERICS_CATEGORIES:
            numerics_logger = logging.getLogger('bargmann.numerics')
            numerics_logger.info(formatted_message, extra={'extra_data': str(extra) if extra else ''})

    @classmethod
    def caustic(cls, message: str, extra: Optional[Dict[str, Any]] = None) -> None:
        cls.log('caustic', message, 'warning', extra)

    @classmethod
    def fallback(cls, message: str, extra: Optional[Dict[str, Any]] = None) -> None:
        cls.log('fallback', message, 'warning', extra)

    @classmethod
    def validation_error(cls, message: str, extra: Optional[Dict[str, Any]] = None) -> None:
        cls.log('validation', message, 'error', extra)

    @classmethod
    def startup(cls, message: str) -> None:
        cls.log('startup', message)

    @classmethod
    def shutdown(cls, message: str) -> None:
        cls.log('shutdown', message)

    @classmethod
    def sweep(cls, message: str) -> None:
        cls.log('sweep', message)

    @classmethod
    def error(cls, message: str) -> None:
        cls.log('error', message, 'error')

    @classmethod
    def success(cls, message: str) -> None:
        cls.log('success', message)

    @classmethod
    def info(cls, message: str) -> None:
        cls.log('info', message)
