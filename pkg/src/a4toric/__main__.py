"""Allow running the command-line front end as `python -m a4toric`."""

from .cli import console_entry

console_entry()
