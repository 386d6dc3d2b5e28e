"""Logging and quadrature helpers."""
from .emoji_logger import EmojiLogger
from .quadrature import complex_quad

__all__ = ["EmojiLogger", "complex_quad"]
