"""Error type shared by every module: a message plus a stable machine code."""


class ToolkitError(Exception):
    """Raised on any contract violation; `code` is a stable machine-readable tag."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)
