"""Command-line pipeline: subcommands, emitters, verification and tracking."""

__all__: list[str] = []
