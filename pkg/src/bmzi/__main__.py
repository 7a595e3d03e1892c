import sys

from bmzi.cli import main

sys.exit(main())
