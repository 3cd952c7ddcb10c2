# -*- coding: utf-8 -*-
"""Executa a CLI: python -m sinai_lab <subcomando> [flags]."""

import sys

from .cli import main

if __name__ == '__main__':
    sys.exit(main())
