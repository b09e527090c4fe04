"""Controlled-English text to animation compiler."""

from .errors import Text2AnimError
from .parser import DepEdge, DepTree, Token, parse, parse_sentence, tag, tokenize, validate_tree
from .scene import SceneSpec, compile_scene, extract_mentions, map_action

__all__ = [
    "DepEdge", "DepTree", "SceneSpec", "Text2AnimError", "Token",
    "compile_scene", "extract_mentions", "map_action", "parse", "parse_sentence",
    "tag", "tokenize", "validate_tree",
]

__version__ = "0.1.0"
