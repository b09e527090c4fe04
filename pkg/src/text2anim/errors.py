"""Exception hierarchy shared by every pipeline stage.

Each stage has one base class so the CLI can map a failure to a single
exit code without inspecting the concrete type.
"""


class Text2AnimError(Exception):
    pass


# --- parsing / scene compilation (exit 2) ---

class ParseError(Text2AnimError):
    pass


class EmptyInput(ParseError):
    def __init__(self):
        super().__init__("no words in input")


class UnknownLexeme(ParseError):
    def __init__(self, index, surface=None):
        self.index = index
        self.surface = surface
        super().__init__(f"token {index}: unknown word {surface!r}")


class NoPredicate(ParseError):
    def __init__(self):
        super().__init__("sentence has no verb")


class UnsupportedConstruction(ParseError):
    def __init__(self, index, reason):
        self.index = index
        self.reason = reason
        super().__init__(f"token {index}: {reason}")


class LexiconError(ParseError):
    pass


class SceneError(ParseError):
    pass


class MissingRole(SceneError):
    def __init__(self, template, role):
        self.template = template
        self.role = role
        super().__init__(f"template {template} requires role {role}")


class NotAnAction(SceneError):
    def __init__(self, lemma):
        self.lemma = lemma
        super().__init__(f"{lemma!r} is not an Action verb")


# --- asset base (exit 3) ---

class AssetError(Text2AnimError):
    pass


class ManifestSyntax(AssetError):
    pass


class MissingFile(AssetError):
    def __init__(self, path):
        self.path = path
        super().__init__(f"missing asset file: {path}")


class NoAsset(AssetError):
    def __init__(self, lemma):
        self.lemma = lemma
        super().__init__(f"no asset for lemma {lemma!r}")


class DecodeError(AssetError):
    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


# --- timeline / rendering (exit 4) ---

class RenderError(Text2AnimError):
    pass


class MissingParam(RenderError):
    def __init__(self, template, name):
        self.template = template
        self.name = name
        super().__init__(f"template {template} is missing parameter {name!r}")


class TickOutOfRange(RenderError):
    def __init__(self, tick, duration):
        self.tick = tick
        super().__init__(f"tick {tick} outside [0, {duration})")


class NeverCollides(RenderError):
    pass


class EncodeError(RenderError):
    pass
