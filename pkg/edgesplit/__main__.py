"""Allow ``python -m edgesplit``."""

from .cli import main

raise SystemExit(main())
