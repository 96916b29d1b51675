#!/usr/bin/env python
"""
kglscope entry point: ``analyze``, ``validate_geniso``, ``decompose`` and
``selftest`` plus the stock Django commands (``migrate``, ``test``).
"""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "kglscope needs Django; install requirements.txt into the active environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
