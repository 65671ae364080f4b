import sys

from kappamu.cli import main

sys.exit(main())
